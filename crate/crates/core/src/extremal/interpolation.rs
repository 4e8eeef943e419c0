use serde::{Deserialize, Serialize};

use super::{certify, AllowedSpan, SolutionReport, SolveOptions};
use crate::error::{Error, Result};
use crate::funcrep::roots::{cluster_roots, roots};
use crate::funcrep::{small_rational, Poly, PowerRep};
use crate::quadrature::{ap_norm_samples, DiscFunction};
use crate::series::{beta_power, TruncatedSeries};
use crate::C64;

/// Roots within this distance of the unit circle are reported as ambiguous.
const BOUNDARY_BAND: f64 = 1e-10;
/// For `p < 2`, roots this close to the circle trigger the integrability warning.
const NEAR_BOUNDARY: f64 = 1e-2;

/// Find `F` in `A^p` of least norm with `F^(j)(0) = c_j`, `j = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem", into = "RawProblem")]
pub struct InterpolationProblem {
    p: f64,
    /// Prescribed derivatives `c_0..c_N`.
    values: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    p: f64,
    #[serde(deserialize_with = "crate::json::loose_complex_vec")]
    values: Vec<C64>,
}

impl TryFrom<RawProblem> for InterpolationProblem {
    type Error = Error;
    fn try_from(r: RawProblem) -> Result<Self> {
        InterpolationProblem::new(r.p, r.values)
    }
}

impl From<InterpolationProblem> for RawProblem {
    fn from(p: InterpolationProblem) -> Self {
        RawProblem { p: p.p, values: p.values }
    }
}

impl InterpolationProblem {
    pub fn new(p: f64, values: Vec<C64>) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("p must lie in (1, inf), got {p}")));
        }
        let Some(c0) = values.first() else {
            return Err(Error::InsufficientData("at least c_0 is required".into()));
        };
        if c0.norm() == 0.0 {
            return Err(Error::Domain("c_0 must be nonzero".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("prescribed values must be finite".into()));
        }
        Ok(InterpolationProblem { p, values })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }
}

/// `F = f^(2/p)` where `f` is the degree-`N` Taylor polynomial of `h^(p/2)`
/// and `h` interpolates the data; valid when `f` has no zeros in the disc,
/// or, for rational `2/p = r/s`, only zeros of order divisible by `s`.
pub fn solve_origin_interpolation(prob: &InterpolationProblem, opts: &SolveOptions) -> Result<SolutionReport> {
    let p = prob.p;
    let n = prob.values.len() - 1;
    let data = TruncatedSeries::from_derivatives(&prob.values)?;
    let c0 = data.coeffs()[0];
    let f_series = beta_power(&data, p / 2.0, c0.powf(p / 2.0))?;
    let f = Poly::new(f_series.coeffs().to_vec());
    let mut warnings = Vec::new();
    check_zeros(&f, p, &mut warnings)?;

    let big_f = PowerRep::new(f.into(), 2.0 / p, c0)?;
    let samples = big_f.sample(&opts.rule);
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::NotApplicable("could not continue f^(2/p) through the disc".into()));
    }
    let norm = ap_norm_samples(&samples, p, &opts.rule);
    let certificate = certify(&samples, norm, p, AllowedSpan::PolynomialDegree(n), opts)?.require()?;
    Ok(SolutionReport { f: big_f, norm, certificate, warnings })
}

fn check_zeros(f: &Poly, p: f64, warnings: &mut Vec<String>) -> Result<()> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    let found = roots(f)?;
    let exponent = 2.0 / p;
    let denominator = small_rational(exponent, 64).map(|(_, s)| s as usize);
    for (z, mult) in cluster_roots(&found, 1e-6) {
        let r = z.norm();
        if (r - 1.0).abs() <= BOUNDARY_BAND {
            warnings.push(format!("zero of f at {z} lies on the unit circle to within {BOUNDARY_BAND:e}"));
        } else if r < 1.0 {
            match denominator {
                Some(s) if mult % s == 0 => {}
                _ => {
                    return Err(Error::NotApplicable(format!(
                        "f has a zero of order {mult} at {z} inside the disc, \
                         so f^(2/p) is not analytic there"
                    )))
                }
            }
        }
        if p < 2.0 && (r - 1.0).abs() <= NEAR_BOUNDARY {
            warnings.push(format!(
                "p < 2 and f has a zero at {z} near the unit circle; \
                 integrability of f^(1-2/p) is not checked"
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn two_term_interpolant() {
        let prob = InterpolationProblem::new(4.0, vec![c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        let sol = solve_origin_interpolation(&prob, &SolveOptions::default()).unwrap();
        assert_eq!(sol.f.exponent(), 0.5);
        let base = sol.f.base().poly();
        assert!((base.coeff(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((base.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((sol.norm - 1.5f64.powf(0.25)).abs() < 1e-8, "{}", sol.norm);
        assert!(sol.certificate.max_offending_coefficient < 1e-6);
    }

    #[test]
    fn p_two_returns_taylor_polynomial() {
        let vals = vec![c(1.0, 1.0), c(0.2, 0.0), c(0.0, -0.4), c(0.3, 0.3)];
        let prob = InterpolationProblem::new(2.0, vals.clone()).unwrap();
        let sol = solve_origin_interpolation(&prob, &SolveOptions::default()).unwrap();
        let expect = TruncatedSeries::from_derivatives(&vals).unwrap();
        for (k, e) in expect.coeffs().iter().enumerate() {
            assert!((sol.f.base().poly().coeff(k) - e).norm() < 1e-14);
        }
        assert_eq!(sol.f.exponent(), 1.0);
    }

    #[test]
    fn in_disc_zero_is_not_applicable() {
        // f = 1 + 4z at p = 4 (c_1 = 2 -> f'(0) = 4) vanishes at -1/4.
        let prob = InterpolationProblem::new(4.0, vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!(matches!(
            solve_origin_interpolation(&prob, &SolveOptions::default()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn invalid_problems() {
        assert!(InterpolationProblem::new(1.0, vec![c(1.0, 0.0)]).is_err());
        assert!(InterpolationProblem::new(3.0, vec![c(0.0, 0.0)]).is_err());
        assert!(InterpolationProblem::new(3.0, vec![]).is_err());
    }

    #[test]
    fn homogeneity() {
        let vals = vec![c(1.0, 0.0), c(0.3, 0.1), c(-0.2, 0.1)];
        let opts = SolveOptions::default();
        let a = solve_origin_interpolation(&InterpolationProblem::new(3.0, vals.clone()).unwrap(), &opts).unwrap();
        let scaled = vals.iter().map(|v| v * 2.5).collect();
        let b = solve_origin_interpolation(&InterpolationProblem::new(3.0, scaled).unwrap(), &opts).unwrap();
        assert!((b.norm / a.norm - 2.5).abs() < 1e-9 * 2.5);
    }
}
