use serde::{Deserialize, Serialize};

use super::{certify, AllowedSpan, SolutionReport, SolveOptions};
use crate::error::{Error, Result};
use crate::funcrep::{Poly, PowerRep};
use crate::quadrature::{ap_norm_samples, DiscFunction};
use crate::C64;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZnbSolution {
    pub report: SolutionReport,
    pub a: C64,
    /// `|P_0 / P_N - b|` for the numeric projection `P` of `|F|^(p-1) sgn F`.
    pub ratio_error: f64,
}

fn sgn(z: C64) -> C64 {
    if z.norm() == 0.0 {
        z
    } else {
        z / z.norm()
    }
}

/// Extremal function in `A^p` for the functional with kernel `z^N + b`.
///
/// `F = sgn(a^(1-2/p)) (z^N + a)^(2/p) / (|a|^2 + 1/(N+1))^(1/p)` with
/// `a = sgn(b) (|b| + sqrt(|b|^2 - 4 (1 - 2/p)/(N+1))) / 2`; requires
/// `|b| >= 1 + (1 - 2/p)/(N+1)`, which forces `|a| >= 1`.
pub fn solve_linear_extremal_znb(p: f64, n: usize, b: C64, opts: &SolveOptions) -> Result<ZnbSolution> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p must lie in (1, inf), got {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let inv = 1.0 / (n + 1) as f64;
    let gamma = 1.0 - 2.0 / p;
    let bound = 1.0 + inv * gamma;
    if b.norm() < bound {
        return Err(Error::HypothesisFailed(format!(
            "|b| = {} is below 1 + (1 - 2/p)/(N+1) = {bound}",
            b.norm()
        )));
    }
    let modulus = (b.norm() + (b.norm_sqr() - 4.0 * inv * gamma).sqrt()) / 2.0;
    let a = sgn(b) * modulus;
    assert!(modulus >= 1.0 - 1e-12, "|a| = {modulus} < 1");

    let t = 2.0 / p;
    let lambda = (a.norm_sqr() + inv).powf(-0.5);
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[0] = a * lambda;
    coeffs[n] = C64::new(lambda, 0.0);
    let base = Poly::new(coeffs);
    // sgn(a^(1-2/p)) a^(2/p) = sgn(a) |a|^(2/p) for any branch with
    // a^(1-2/p) a^(2/p) = a.
    let a_t = a.powf(t);
    let anchor = sgn(a / a_t) * a_t * lambda.powf(t);
    let f = PowerRep::new(base.into(), t, anchor)?;

    let samples = f.sample(&opts.rule);
    let norm = ap_norm_samples(&samples, p, &opts.rule);
    let certificate = certify(&samples, norm, p, AllowedSpan::Monomials(vec![0, n]), opts)?;
    let (p0, pn) = (certificate.projection[0], certificate.projection[n]);
    let ratio_error = (p0 / pn - b).norm();
    // A positive multiple of z^N + b: P_N must be real and positive.
    let phase_error = pn.arg().abs();
    let certificate = certificate.require()?;
    if ratio_error >= opts.cert_tol * b.norm().max(1.0) || phase_error >= opts.cert_tol {
        return Err(Error::CertificateFailed {
            offending: ratio_error.max(phase_error),
            tolerance: opts.cert_tol,
        });
    }
    let report = SolutionReport { f, norm, certificate, warnings: Vec::new() };
    Ok(ZnbSolution { report, a, ratio_error })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn p_two_is_normalized_kernel() {
        let b = c(0.0, 1.5);
        let sol = solve_linear_extremal_znb(2.0, 2, b, &SolveOptions::default()).unwrap();
        assert!((sol.a - b).norm() < 1e-15);
        let s = (b.norm_sqr() + 1.0 / 3.0).sqrt();
        let z = c(0.3, -0.4);
        let expect = (z * z + b) / s;
        assert!((sol.report.f.eval_power(z).unwrap() - expect).norm() < 1e-14);
    }

    #[test]
    fn p_four_n_one_b_two() {
        let sol = solve_linear_extremal_znb(4.0, 1, c(2.0, 0.0), &SolveOptions::default()).unwrap();
        assert!((sol.a - c((2.0 + 3f64.sqrt()) / 2.0, 0.0)).norm() < 1e-15);
        assert!((sol.report.norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn hypothesis_enforced() {
        assert!(matches!(
            solve_linear_extremal_znb(4.0, 1, c(1.1, 0.0), &SolveOptions::default()),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn branch_consistency() {
        // |z^N / a| < 1, so (1 + z^N/a)^t is the principal power along every ray.
        for (p, n, b) in [(3.0, 2, c(-2.5, 0.0)), (4.0 / 3.0, 3, c(0.0, 1.8)), (6.0, 1, c(1.6, 0.0))] {
            let sol = solve_linear_extremal_znb(p, n, b, &SolveOptions::default()).unwrap();
            let f = &sol.report.f;
            for k in 0..10 {
                let z = C64::from_polar(0.099 * k as f64, 0.7 * k as f64);
                let expect = f.anchor() * (c(1.0, 0.0) + z.powi(n as i32) / sol.a).powf(2.0 / p);
                assert!((f.eval_power(z).unwrap() - expect).norm() < 1e-10, "{z}");
            }
        }
    }
}
