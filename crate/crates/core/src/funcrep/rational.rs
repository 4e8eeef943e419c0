use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{binomial, rising, same_point, Poly, NEGLIGIBLE};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::C64;

/// `coef / (1 - conj(a) z)^order`, with `0 < |a| < 1` so the pole `1/conj(a)`
/// lies outside the closed disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoleTerm")]
pub struct PoleTerm {
    pub a: C64,
    pub order: usize,
    pub coef: C64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoleTerm {
    a: C64,
    order: usize,
    coef: C64,
}

impl TryFrom<RawPoleTerm> for PoleTerm {
    type Error = Error;
    fn try_from(r: RawPoleTerm) -> Result<Self> {
        PoleTerm::new(r.a, r.order, r.coef)
    }
}

impl PoleTerm {
    pub fn new(a: C64, order: usize, coef: C64) -> Result<Self> {
        let m = a.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::Domain(format!(
                "pole base point must satisfy 0 < |a| < 1, got |a| = {m}"
            )));
        }
        if order == 0 {
            return Err(Error::Domain("pole order must be at least 1".into()));
        }
        Ok(PoleTerm { a, order, coef })
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coef / (C64::new(1.0, 0.0) - self.a.conj() * z).powi(self.order as i32)
    }
}

/// Polynomial part plus a sum of [`PoleTerm`]s.
///
/// Terms sharing a base point and order are merged and terms with negligible
/// coefficients are dropped; terms are kept sorted so equal functions have
/// equal representations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "RawRational")]
pub struct RationalRep {
    poly: Poly,
    terms: Vec<PoleTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRational {
    #[serde(default)]
    poly: Poly,
    #[serde(default)]
    terms: Vec<PoleTerm>,
}

impl From<RawRational> for RationalRep {
    fn from(r: RawRational) -> Self {
        RationalRep::new(r.poly, r.terms)
    }
}

impl From<Poly> for RationalRep {
    fn from(poly: Poly) -> Self {
        RationalRep { poly, terms: Vec::new() }
    }
}

impl RationalRep {
    pub fn new(poly: Poly, terms: Vec<PoleTerm>) -> Self {
        let mut merged: Vec<PoleTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged
                .iter_mut()
                .find(|m| m.order == t.order && same_point(m.a, t.a))
            {
                Some(m) => m.coef += t.coef,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coef.norm() > NEGLIGIBLE);
        merged.sort_by(|x, y| {
            x.a.re
                .total_cmp(&y.a.re)
                .then(x.a.im.total_cmp(&y.a.im))
                .then(x.order.cmp(&y.order))
        });
        RationalRep { poly, terms: merged }
    }

    /// `coef / (1 - conj(a) z)^order` on its own.
    pub fn pole(a: C64, order: usize, coef: C64) -> Result<Self> {
        Ok(RationalRep::new(Poly::zero(), vec![PoleTerm::new(a, order, coef)?]))
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    /// Distinct base points, in term order.
    pub fn base_points(&self) -> Vec<C64> {
        let mut pts: Vec<C64> = Vec::new();
        for t in &self.terms {
            if !pts.iter().any(|&p| same_point(p, t.a)) {
                pts.push(t.a);
            }
        }
        pts
    }

    /// Pole terms at base point `a`, as a map from order to coefficient.
    pub fn terms_at(&self, a: C64) -> BTreeMap<usize, C64> {
        self.terms
            .iter()
            .filter(|t| same_point(t.a, a))
            .map(|t| (t.order, t.coef))
            .collect()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.terms
            .iter()
            .fold(self.poly.eval(z), |acc, t| acc + t.eval(z))
    }

    /// Exact `order`-th derivative, using
    /// `d/dz (1 - conj(a) z)^-k = k conj(a) (1 - conj(a) z)^-(k+1)`.
    pub fn derivative(&self, order: usize) -> RationalRep {
        let terms = self
            .terms
            .iter()
            .map(|t| PoleTerm {
                a: t.a,
                order: t.order + order,
                coef: t.coef * rising(t.order, order) * t.a.conj().powi(order as i32),
            })
            .collect();
        RationalRep::new(self.poly.nth_derivative(order), terms)
    }

    /// Taylor coefficients `c_0..c_n` at the origin.
    pub fn taylor_at_origin(&self, n: usize) -> TruncatedSeries {
        TruncatedSeries::new(self.taylor_at(C64::new(0.0, 0.0), n))
            .expect("series has n + 1 >= 1 coefficients")
    }

    /// Taylor coefficients of `h -> f(w + h)` up to `h^n`.
    pub fn taylor_at(&self, w: C64, n: usize) -> Vec<C64> {
        let shifted = self.poly.shifted(w);
        let mut out: Vec<C64> = (0..=n).map(|k| shifted.coeff(k)).collect();
        for t in &self.terms {
            let abar = t.a.conj();
            let base = C64::new(1.0, 0.0) - abar * w;
            let ratio = abar / base;
            let lead = t.coef / base.powi(t.order as i32);
            let mut pow = C64::new(1.0, 0.0);
            for (m, slot) in out.iter_mut().enumerate() {
                *slot += lead * binomial(m + t.order - 1, t.order - 1) * pow;
                pow *= ratio;
            }
        }
        out
    }

    /// Residue at `z = 1/conj(a)`: only order-1 terms contribute, each `-coef/conj(a)`.
    pub fn residue_at_pole(&self, a: C64) -> Result<C64> {
        let at = self.terms_at(a);
        if at.is_empty() && !self.base_points().iter().any(|&p| same_point(p, a)) {
            return Err(Error::Domain(format!("{a} is not a base point of this function")));
        }
        Ok(at.get(&1).map(|c| -c / a.conj()).unwrap_or_default())
    }

    pub fn scale(&self, c: C64) -> RationalRep {
        RationalRep::new(
            self.poly.scale(c),
            self.terms
                .iter()
                .map(|t| PoleTerm { coef: t.coef * c, ..*t })
                .collect(),
        )
    }

    pub fn add(&self, other: &RationalRep) -> RationalRep {
        RationalRep::new(
            &self.poly + &other.poly,
            self.terms.iter().chain(&other.terms).copied().collect(),
        )
    }

    /// Exact product, re-expanded in the polynomial + pole basis.
    pub fn mul(&self, other: &RationalRep) -> RationalRep {
        let mut acc = RationalRep::from(&self.poly * &other.poly);
        for t in &other.terms {
            acc = acc.add(&poly_times_pole(&self.poly, t));
        }
        for t in &self.terms {
            acc = acc.add(&poly_times_pole(&other.poly, t));
            for u in &other.terms {
                acc = acc.add(&pole_times_pole(t, u));
            }
        }
        acc
    }

    /// Integer power by repeated multiplication; `pow(0)` is the constant 1.
    pub fn pow(&self, n: usize) -> RationalRep {
        (0..n).fold(RationalRep::from(Poly::constant(C64::new(1.0, 0.0))), |acc, _| {
            acc.mul(self)
        })
    }
}

/// Coefficients `b_2..b_{n+2}` with
/// `z^n / (1 - conj(a) z)^(n+2) = sum_j b_j / (1 - conj(a) z)^j`.
///
/// Substituting `z = (1 - w) / conj(a)` with `w = 1 - conj(a) z` gives
/// `b_j = conj(a)^-n C(n, n+2-j) (-1)^(n+2-j)`; orders 0 and 1 never appear.
pub fn partial_fractions_shifted_monomial(n: usize, a: C64) -> Result<BTreeMap<usize, C64>> {
    if a.norm() == 0.0 {
        return Err(Error::Domain("partial fractions need a != 0".into()));
    }
    let inv = a.conj().inv().powi(n as i32);
    Ok((2..=n + 2)
        .map(|j| {
            let i = n + 2 - j;
            let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            (j, inv * binomial(n, i) * sign)
        })
        .collect())
}

/// `p(z) * t` in the pole basis.
fn poly_times_pole(p: &Poly, t: &PoleTerm) -> RationalRep {
    let abar = t.a.conj();
    let mut poly = Poly::zero();
    let mut terms = Vec::new();
    for (n, &pc) in p.coeffs().iter().enumerate() {
        if pc.norm() == 0.0 {
            continue;
        }
        // z^n = conj(a)^-n sum_i C(n,i) (-w)^i, with w = 1 - conj(a) z.
        let lead = pc * t.coef * abar.inv().powi(n as i32);
        for i in 0..=n {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let c = lead * binomial(n, i) * sign;
            if i < t.order {
                terms.push(PoleTerm { a: t.a, order: t.order - i, coef: c });
            } else {
                // w^(i - order) expanded as a polynomial in z.
                let e = i - t.order;
                let w_pow: Vec<C64> = (0..=e)
                    .map(|k| {
                        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                        c * binomial(e, k) * s * abar.powi(k as i32)
                    })
                    .collect();
                poly = &poly + &Poly::new(w_pow);
            }
        }
    }
    RationalRep::new(poly, terms)
}

/// `t * u` in the pole basis.
fn pole_times_pole(t: &PoleTerm, u: &PoleTerm) -> RationalRep {
    let coef = t.coef * u.coef;
    if same_point(t.a, u.a) {
        return RationalRep::new(
            Poly::zero(),
            vec![PoleTerm { a: t.a, order: t.order + u.order, coef }],
        );
    }
    let mut terms = partial_fraction_pair(t.a, t.order, u.a, u.order);
    terms.extend(partial_fraction_pair(u.a, u.order, t.a, t.order));
    for term in &mut terms {
        term.coef *= coef;
    }
    RationalRep::new(Poly::zero(), terms)
}

/// Part of `1 / (u^k v^l)` singular at `u = 0`, where `u = 1 - conj(a) z` and
/// `v = 1 - conj(b) z = alpha + beta u`.
fn partial_fraction_pair(a: C64, k: usize, b: C64, l: usize) -> Vec<PoleTerm> {
    let abar = a.conj();
    let bbar = b.conj();
    let alpha = (abar - bbar) / abar;
    let beta = bbar / abar;
    let lead = alpha.powi(-(l as i32));
    let q = -beta / alpha;
    (0..k)
        .map(|m| PoleTerm {
            a,
            order: k - m,
            coef: lead * binomial(l + m - 1, m) * q.powi(m as i32),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn eval_examples() {
        let f = RationalRep::pole(c(0.5, 0.0), 2, c(1.0, 0.0)).unwrap();
        assert!(close(f.eval(c(0.5, 0.0)), c(16.0 / 9.0, 0.0), 1e-15));
        let g = RationalRep::from(Poly::monomial(2, c(1.0, 0.0)));
        assert!(close(g.eval(c(0.0, 1.0)), c(-1.0, 0.0), 1e-15));
        let h = RationalRep::from(Poly::constant(c(1.0, 0.0)))
            .add(&RationalRep::pole(c(0.3, 0.0), 1, c(1.0, 0.0)).unwrap());
        assert!(close(h.eval(c(0.0, 0.0)), c(2.0, 0.0), 1e-15));
    }

    #[test]
    fn rejects_bad_base_points() {
        assert!(PoleTerm::new(c(0.0, 0.0), 1, c(1.0, 0.0)).is_err());
        assert!(PoleTerm::new(c(1.0, 0.0), 1, c(1.0, 0.0)).is_err());
        assert!(PoleTerm::new(c(0.5, 0.0), 0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let a = c(0.3, -0.4);
        let d = RationalRep::pole(a, 2, c(1.0, 0.0)).unwrap().derivative(1);
        assert_eq!(d.terms(), &[PoleTerm { a, order: 3, coef: a.conj() * 2.0 }]);
        let d2 = RationalRep::pole(a, 1, c(2.0, 1.0)).unwrap().derivative(2);
        let want = a.conj().powi(2) * 2.0 * c(2.0, 1.0);
        assert_eq!(d2.terms().len(), 1);
        assert_eq!(d2.terms()[0].order, 3);
        assert!(close(d2.terms()[0].coef, want, 1e-15));
    }

    #[test]
    fn partial_fraction_examples() {
        let a = c(0.4, 0.3);
        let ab = a.conj();
        let b0 = partial_fractions_shifted_monomial(0, a).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(close(b0[&2], c(1.0, 0.0), 1e-15));
        let b1 = partial_fractions_shifted_monomial(1, a).unwrap();
        assert!(close(b1[&3], ab.inv(), 1e-14));
        assert!(close(b1[&2], -ab.inv(), 1e-14));
        let b2 = partial_fractions_shifted_monomial(2, a).unwrap();
        assert!(close(b2[&4], ab.inv().powi(2), 1e-14));
        assert!(close(b2[&3], -ab.inv().powi(2) * 2.0, 1e-14));
        assert!(close(b2[&2], ab.inv().powi(2), 1e-14));
        assert!(!b2.contains_key(&0) && !b2.contains_key(&1));
        assert!(partial_fractions_shifted_monomial(2, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn residue_examples() {
        let f = RationalRep::pole(c(0.5, 0.0), 1, c(2.0, 0.0)).unwrap();
        assert!(close(f.residue_at_pole(c(0.5, 0.0)).unwrap(), c(-4.0, 0.0), 1e-15));
        let g = RationalRep::pole(c(0.5, 0.0), 2, c(2.0, 0.0)).unwrap();
        assert_eq!(g.residue_at_pole(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        let a = c(0.0, 0.5);
        let h = RationalRep::pole(a, 1, c(3.0, 0.0))
            .unwrap()
            .add(&RationalRep::pole(a, 3, c(5.0, 0.0)).unwrap());
        assert!(close(h.residue_at_pole(a).unwrap(), c(0.0, -6.0), 1e-15));
        assert!(h.residue_at_pole(c(0.2, 0.0)).is_err());
    }

    #[test]
    fn taylor_examples() {
        let a = c(0.3, 0.6);
        let s = RationalRep::pole(a, 1, c(1.0, 0.0)).unwrap().taylor_at_origin(2);
        let want = [c(1.0, 0.0), a.conj(), a.conj().powi(2)];
        for (x, y) in s.coeffs().iter().zip(want) {
            assert!(close(*x, y, 1e-15));
        }
        let s2 = RationalRep::pole(a, 2, c(1.0, 0.0)).unwrap().taylor_at_origin(1);
        assert!(close(s2.coeffs()[1], a.conj() * 2.0, 1e-15));
        let s3 = RationalRep::from(Poly::monomial(3, c(1.0, 0.0))).taylor_at_origin(2);
        assert!(s3.coeffs().iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn mul_examples() {
        let p = RationalRep::from(Poly::from_real(&[1.0, 1.0]))
            .mul(&RationalRep::from(Poly::from_real(&[1.0, -1.0])));
        assert_eq!(p.poly(), &Poly::from_real(&[1.0, 0.0, -1.0]));
        let a = c(0.5, 0.2);
        let k = RationalRep::pole(a, 1, c(1.0, 0.0)).unwrap();
        let k2 = k.mul(&k);
        assert_eq!(k2.terms(), &[PoleTerm { a, order: 2, coef: c(1.0, 0.0) }]);
    }

    #[test]
    fn blaschke_square_expansion() {
        // ((a - z) / (1 - conj(a) z))^2 with a = 0.5
        let a = c(0.5, 0.0);
        let b = RationalRep::from(Poly::from_real(&[0.5, -1.0]))
            .mul(&RationalRep::pole(a, 1, c(1.0, 0.0)).unwrap());
        let sq = b.mul(&b);
        let orders: Vec<usize> = sq.terms().iter().map(|t| t.order).collect();
        assert_eq!(orders, vec![1, 2]);
        for k in 0..10 {
            let z = C64::from_polar(0.9 * k as f64 / 10.0, 0.7 * k as f64);
            let direct = b.eval(z).powi(2);
            assert!(close(sq.eval(z), direct, 1e-13));
        }
    }

    #[test]
    fn distinct_pole_product() {
        let f = RationalRep::pole(c(0.3, 0.1), 2, c(1.0, -1.0)).unwrap();
        let g = RationalRep::pole(c(-0.2, 0.5), 3, c(0.5, 0.0)).unwrap();
        let h = f.mul(&g);
        assert!(h.poly().is_zero());
        for k in 0..10 {
            let z = C64::from_polar(0.95 * k as f64 / 10.0, 1.3 * k as f64);
            assert!(close(h.eval(z), f.eval(z) * g.eval(z), 1e-12));
        }
    }

    #[test]
    fn off_origin_taylor_matches_eval() {
        let f = RationalRep::new(
            Poly::from_real(&[1.0, -2.0, 0.5]),
            vec![
                PoleTerm::new(c(0.4, 0.2), 2, c(1.0, 0.5)).unwrap(),
                PoleTerm::new(c(-0.3, 0.0), 1, c(0.0, 2.0)).unwrap(),
            ],
        );
        let w = c(0.2, -0.3);
        let t = f.taylor_at(w, 30);
        let h = c(0.05, 0.02);
        let approx = t.iter().rev().fold(C64::new(0.0, 0.0), |acc, &x| acc * h + x);
        assert!(close(approx, f.eval(w + h), 1e-14));
    }
}
