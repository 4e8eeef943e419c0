//! Truncated power series at the origin and their real powers.
//!
//! Coefficients are stored in Taylor convention (`c_j = f^(j)(0) / j!`).
//! [`TruncatedSeries::from_derivatives`] and [`TruncatedSeries::derivatives`]
//! convert at the boundary for callers that think in derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::factorial;
use crate::C64;

/// Taylor coefficients `c_0..c_N`; never empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct TruncatedSeries {
    coeffs: Vec<C64>,
}

impl TryFrom<Vec<C64>> for TruncatedSeries {
    type Error = Error;
    fn try_from(v: Vec<C64>) -> Result<Self> {
        TruncatedSeries::new(v)
    }
}

impl From<TruncatedSeries> for Vec<C64> {
    fn from(s: TruncatedSeries) -> Self {
        s.coeffs
    }
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InsufficientData("a series needs at least c_0".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("series coefficients must be finite".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// From derivative values `f(0), f'(0), ..., f^(N)(0)`.
    pub fn from_derivatives(derivs: &[C64]) -> Result<Self> {
        TruncatedSeries::new(
            derivs
                .iter()
                .enumerate()
                .map(|(j, d)| d / factorial(j))
                .collect(),
        )
    }

    pub fn derivatives(&self) -> Vec<C64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * factorial(j))
            .collect()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Truncation order `N` (one less than the number of coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: C64) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Product truncated to the shorter of the two orders.
    pub fn mul_truncated(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
            .collect();
        TruncatedSeries { coeffs }
    }
}

/// Taylor coefficients of `h^p` where `h` has Taylor data `s`, on the branch
/// with `h(0)^p = a0`.
///
/// Uses the recurrence `n c_0 g_n = sum_{k=1..n} (k p - (n - k)) c_k g_{n-k}`.
pub fn beta_power(s: &TruncatedSeries, p: f64, a0: C64) -> Result<TruncatedSeries> {
    let c = s.coeffs();
    let c0 = c[0];
    if c0.norm() == 0.0 {
        return Err(Error::Domain("beta_power needs c_0 != 0".into()));
    }
    let expected = c0.norm().powf(p);
    if (a0.norm() - expected).abs() > 1e-12 * expected.max(1.0) {
        return Err(Error::Domain(format!(
            "anchor modulus {} inconsistent with |c_0|^p = {expected}",
            a0.norm()
        )));
    }
    let mut g = Vec::with_capacity(c.len());
    g.push(a0);
    for n in 1..c.len() {
        let acc: C64 = (1..=n)
            .map(|k| c[k] * g[n - k] * (k as f64 * p - (n - k) as f64))
            .sum();
        g.push(acc / (c0 * n as f64));
    }
    TruncatedSeries::new(g)
}

/// Derivative-convention wrapper: `j`-th derivatives of `h^p` from those of `h`.
pub fn beta_power_derivatives(derivs: &[C64], p: f64, a0: C64) -> Result<Vec<C64>> {
    let s = TruncatedSeries::from_derivatives(derivs)?;
    Ok(beta_power(&s, p, a0)?.derivatives())
}

/// `max_j |(s^p)^(1/p) - s|_j` using the principal branch for `c_0^p`.
pub fn beta_roundtrip_defect(s: &TruncatedSeries, p: f64) -> Result<f64> {
    if p == 0.0 {
        return Err(Error::Domain("round trip needs p != 0".into()));
    }
    let c0 = s.coeffs()[0];
    let forward = beta_power(s, p, c0.powf(p))?;
    let back = beta_power(&forward, 1.0 / p, c0)?;
    Ok(back
        .coeffs()
        .iter()
        .zip(s.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn series(v: &[C64]) -> TruncatedSeries {
        TruncatedSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_empty_and_bad_anchor() {
        assert!(TruncatedSeries::new(vec![]).is_err());
        let s = series(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(beta_power(&s, 2.0, c(0.0, 0.0)).is_err());
        let s = series(&[c(2.0, 0.0)]);
        assert!(beta_power(&s, 2.0, c(3.0, 0.0)).is_err());
        assert!(beta_power(&s, 2.0, c(0.0, -4.0)).is_ok());
    }

    #[test]
    fn first_order_coefficient() {
        for p in [1.5, 2.0, 3.0] {
            let c1 = c(0.3, -0.7);
            let g = beta_power(&series(&[c(1.0, 0.0), c1]), p / 2.0, c(1.0, 0.0)).unwrap();
            assert!((g.coeffs()[1] - c1 * (p / 2.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn second_derivative_matches_closed_form() {
        let (c1, c2) = (c(0.4, 0.1), c(-0.2, 0.3));
        for p in [4.0 / 3.0, 3.0, 4.0, 6.0] {
            let d = beta_power_derivatives(&[c(1.0, 0.0), c1, c2], p / 2.0, c(1.0, 0.0)).unwrap();
            let expect = c1 * c1 * (p * (p - 2.0) / 4.0) + c2 * (p / 2.0);
            assert!((d[2] - expect).norm() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn identity_exponent() {
        let s = series(&[c(2.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)]);
        let g = beta_power(&s, 1.0, s.coeffs()[0]).unwrap();
        for (a, b) in g.coeffs().iter().zip(s.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn roundtrip_examples() {
        assert!(beta_roundtrip_defect(&series(&[c(1.0, 0.0), c(0.5, 0.0)]), 2.0).unwrap() < 1e-15);
        assert_eq!(beta_roundtrip_defect(&series(&[c(3.0, -1.0)]), 0.7).unwrap(), 0.0);
        let s = series(&[c(2.0, 0.0), c(1.0, 1.0), c(-0.3, 0.0)]);
        assert!(beta_roundtrip_defect(&s, 1.5).unwrap() < 1e-12);
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        (1usize..=12).prop_flat_map(|n| {
            (
                (0.5f64..2.0, -3.0f64..3.0),
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n),
            )
                .prop_map(|((r, th), rest)| {
                    let mut v = vec![C64::from_polar(r, th)];
                    v.extend(rest.into_iter().map(|(a, b)| c(a, b) * 0.5));
                    TruncatedSeries::new(v).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn integer_powers_match_products(s in arb_series(), m in 1usize..=3) {
            let g = beta_power(&s, m as f64, s.coeffs()[0].powi(m as i32)).unwrap();
            let mut direct = s.clone();
            for _ in 1..m {
                direct = direct.mul_truncated(&s);
            }
            let scale = s.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max).powi(m as i32);
            for (a, b) in g.coeffs().iter().zip(direct.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-12 * scale.max(1.0));
            }
        }

        #[test]
        fn roundtrip_is_tight(s in arb_series(), p in prop::sample::select(vec![0.25, 0.5, 4.0 / 3.0, 1.5, 3.0, 4.0, 8.0])) {
            prop_assert!(beta_roundtrip_defect(&s, p).unwrap() < 1e-10);
        }

        #[test]
        fn exponents_add(s in arb_series(), p in 0.3f64..2.5, q in 0.3f64..2.5) {
            let c0 = s.coeffs()[0];
            let gp = beta_power(&s, p, c0.powf(p)).unwrap();
            let gq = beta_power(&s, q, c0.powf(q)).unwrap();
            let gpq = beta_power(&s, p + q, c0.powf(p) * c0.powf(q)).unwrap();
            let prod = gp.mul_truncated(&gq);
            for (a, b) in gpq.coeffs().iter().zip(prod.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
            }
        }
    }
}
