use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::SolveOptions;
use crate::error::{Error, Result};
use crate::linalg::{least_squares, null_space_basis};
use crate::projection::{kernel_of, FunctionalSpec};
use crate::quadrature::{ap_norm_samples, projection_coeffs, signed_power_samples, DiscFunction, DiscRule};
use crate::C64;

/// Where `P(|F|^(p-1) sgn F)` is allowed to live.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllowedSpan {
    /// Polynomials of degree at most this.
    PolynomialDegree(usize),
    /// Polynomials supported on these powers of `z`.
    Monomials(Vec<usize>),
    /// Linear span of the kernels of these functionals.
    Kernels(Vec<FunctionalSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub allowed: AllowedSpan,
    pub projection_degree: usize,
    /// Largest coefficient of the projection outside the allowed span,
    /// computed for `F / ||F||` so it does not depend on scaling.
    pub max_offending_coefficient: f64,
    pub tolerance: f64,
    /// Taylor coefficients of the numeric projection for `F / ||F||`.
    pub projection: Vec<C64>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.max_offending_coefficient < self.tolerance
    }

    pub fn require(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::CertificateFailed {
                offending: self.max_offending_coefficient,
                tolerance: self.tolerance,
            })
        }
    }
}

/// Numeric projection of `|G|^(p-1) sgn G`, `G = F / norm`, and its distance
/// from `allowed`.
pub fn certify(
    samples: &[C64],
    norm: f64,
    p: f64,
    allowed: AllowedSpan,
    opts: &SolveOptions,
) -> Result<Certificate> {
    let degree = opts.cert_degree;
    let normalized: Vec<C64> = samples.iter().map(|s| s / norm).collect();
    let u = signed_power_samples(&normalized, p);
    let coeffs = projection_coeffs(&u, degree, &opts.rule);
    let offending = match &allowed {
        AllowedSpan::PolynomialDegree(n) => {
            if *n >= degree {
                return Err(Error::Domain(format!(
                    "certificate degree {degree} must exceed the allowed degree {n}"
                )));
            }
            coeffs[n + 1..].iter().map(|c| c.norm()).fold(0.0, f64::max)
        }
        AllowedSpan::Monomials(keep) => coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| !keep.contains(k))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max),
        AllowedSpan::Kernels(specs) => kernel_fit_residual(&coeffs, specs)?,
    };
    Ok(Certificate {
        allowed,
        projection_degree: degree,
        max_offending_coefficient: offending,
        tolerance: opts.cert_tol,
        projection: coeffs,
    })
}

/// Largest coefficient of `coeffs - sum_i x_i k_i` for the least-squares `x`.
fn kernel_fit_residual(coeffs: &[C64], specs: &[FunctionalSpec]) -> Result<f64> {
    let degree = coeffs.len() - 1;
    let columns = specs
        .iter()
        .map(|s| Ok(kernel_of(s)?.taylor_at_origin(degree).coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let a = DMatrix::from_fn(degree + 1, specs.len(), |k, i| columns[i][k]);
    let b = DVector::from_column_slice(coeffs);
    let x = least_squares(&a, &b, 1e-13)?;
    let r = b - a * x;
    Ok(r.iter().map(|c| c.norm()).fold(0.0, f64::max))
}

/// Largest `|∫ h |F|^(p-1) conj(sgn F) dσ| / ||F||^(p-1)` over an orthonormal
/// basis of polynomials `h` of degree at most `degree` that every functional in
/// `allowed` annihilates. Near zero exactly when `F` is extremal for the span
/// of `allowed`.
pub fn check_extremality(
    f: &(impl DiscFunction + ?Sized),
    p: f64,
    allowed: &[FunctionalSpec],
    rule: &DiscRule,
    degree: usize,
) -> Result<f64> {
    let samples = f.sample(rule);
    let norm = ap_norm_samples(&samples, p, rule);
    let u = signed_power_samples(&samples, p);
    // m_k = ∫ u conj(z^k) dσ
    let moments: Vec<C64> = projection_coeffs(&u, degree, rule)
        .into_iter()
        .enumerate()
        .map(|(k, c)| c / (k + 1) as f64)
        .collect();
    let constraints = DMatrix::from_fn(allowed.len(), degree + 1, |i, k| allowed[i].on_monomial(k));
    let basis = null_space_basis(&constraints, 1e-12)?;
    let worst = basis
        .column_iter()
        .map(|h| {
            h.iter()
                .zip(&moments)
                .map(|(hk, mk)| hk * mk.conj())
                .sum::<C64>()
                .norm()
        })
        .fold(0.0, f64::max);
    Ok(worst / norm.powf(p - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{Poly, PowerRep};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn origin_derivatives(n: usize) -> Vec<FunctionalSpec> {
        (0..=n).map(|k| FunctionalSpec::derivative(c(0.0, 0.0), k).unwrap()).collect()
    }

    #[test]
    fn a2_normalized_kernel_is_extremal() {
        let rule = DiscRule::default();
        let k = Poly::new(vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.0, 2.0)]);
        let v = check_extremality(&k, 2.0, &origin_derivatives(2), &rule, 12).unwrap();
        assert!(v < 1e-10, "{v}");
    }

    #[test]
    fn square_root_is_extremal_and_perturbation_is_not() {
        let rule = DiscRule::default();
        let f = PowerRep::new(Poly::from_real(&[1.0, 1.0]).into(), 0.5, c(1.0, 0.0)).unwrap();
        let allowed = origin_derivatives(1);
        let v = check_extremality(&f, 4.0, &allowed, &rule, 12).unwrap();
        assert!(v < 1e-6, "{v}");
        let g = |z: C64| f.value(z) + z.powi(3) * 0.05;
        let w = check_extremality(&g, 4.0, &allowed, &rule, 12).unwrap();
        assert!(w >= 1e-3, "{w}");
    }

    #[test]
    fn kernel_span_certificate() {
        // For p = 2 the projection of F is F itself, so a kernel is certified.
        let a = c(0.3, -0.2);
        let spec = FunctionalSpec::derivative(a, 1).unwrap();
        let k = kernel_of(&spec).unwrap();
        let opts = SolveOptions::default();
        let samples = k.sample(&opts.rule);
        let norm = ap_norm_samples(&samples, 2.0, &opts.rule);
        let cert = certify(&samples, norm, 2.0, AllowedSpan::Kernels(vec![spec]), &opts).unwrap();
        assert!(cert.passed(), "{}", cert.max_offending_coefficient);
        let other = FunctionalSpec::derivative(c(0.0, 0.5), 0).unwrap();
        let cert = certify(&samples, norm, 2.0, AllowedSpan::Kernels(vec![other]), &opts).unwrap();
        assert!(!cert.passed());
        assert!(cert.require().is_err());
    }
}
