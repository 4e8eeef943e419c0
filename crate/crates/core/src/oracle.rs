//! Brute-force minimal-norm interpolation over polynomials of bounded degree.
//!
//! The closed forms elsewhere in the crate are checked against these
//! optimizers, which only use quadrature and convexity: no kernels, no
//! fractional powers, no projections.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divisor::ZeroSet;
use crate::error::{Error, Result};
use crate::funcrep::Poly;
use crate::linalg::{least_squares, null_space_basis};
use crate::projection::FunctionalSpec;
use crate::quadrature::{ap_norm_samples, pairing_samples, signed_power_samples, DiscFunction, DiscRule};
use crate::C64;

/// Below this exponent the gradient is too rough for first-order descent.
pub const MIN_ORACLE_P: f64 = 1.1;
/// Degree of the test polynomials in [`extremality_defect`].
pub const DEFECT_DEGREE: usize = 10;

const ARMIJO: f64 = 1e-4;
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Degree `D` of the polynomial search space.
    pub truncation_degree: usize,
    pub rule: DiscRule,
    pub max_iters: usize,
    /// Converged once the accepted step is below this, relative to the iterate.
    pub step_tol: f64,
    /// and the relative objective decrease is below this.
    pub objective_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            truncation_degree: 24,
            rule: DiscRule::default(),
            max_iters: 20_000,
            step_tol: 1e-10,
            objective_tol: 1e-13,
        }
    }
}

impl OracleConfig {
    pub fn with_degree(mut self, d: usize) -> Self {
        self.truncation_degree = d;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSolution {
    pub coeffs: Poly,
    pub norm: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CanonicalOracle {
    /// `f / ||f||` for the minimizer `f`.
    pub coeffs: Poly,
    /// Normalizing derivative of the normalized function at the origin.
    pub leading_value: f64,
    pub leading_order: usize,
    pub iterations: usize,
}

/// `b -> ∫ |sum_k b_k e_k|^p dσ` with `e_k = sqrt(k+1) z^k`, the orthonormal
/// monomials of `A^2`.
pub struct NormObjective<'a> {
    p: f64,
    rule: &'a DiscRule,
    /// `basis[k][i] = e_k(z_i)`.
    basis: Vec<Vec<C64>>,
}

impl<'a> NormObjective<'a> {
    pub fn new(p: f64, degree: usize, rule: &'a DiscRule) -> Self {
        let nodes = rule.nodes();
        let mut basis = Vec::with_capacity(degree + 1);
        let mut powers = vec![C64::new(1.0, 0.0); nodes.len()];
        for k in 0..=degree {
            let s = ((k + 1) as f64).sqrt();
            basis.push(powers.iter().map(|z| z * s).collect());
            for (zk, n) in powers.iter_mut().zip(nodes) {
                *zk *= n.z;
            }
        }
        NormObjective { p, rule, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn samples(&self, b: &DVector<C64>) -> Vec<C64> {
        (0..self.rule.nodes().len())
            .into_par_iter()
            .map(|i| self.basis.iter().zip(b.iter()).map(|(e, c)| e[i] * c).sum())
            .collect()
    }

    pub fn value(&self, b: &DVector<C64>) -> f64 {
        self.value_from_samples(&self.samples(b))
    }

    fn value_from_samples(&self, s: &[C64]) -> f64 {
        let powered: Vec<f64> = s.iter().map(|v| v.norm().powf(self.p)).collect();
        self.rule.integrate_real(&powered)
    }

    /// Real gradient packed as a complex vector: the directional derivative
    /// along `d` is `Re <grad, d>`. Equals `p ∫ |f|^(p-2) f conj(e_k) dσ`.
    pub fn gradient(&self, b: &DVector<C64>) -> DVector<C64> {
        self.gradient_from_samples(&self.samples(b))
    }

    fn gradient_from_samples(&self, s: &[C64]) -> DVector<C64> {
        let u = signed_power_samples(s, self.p);
        let g: Vec<C64> = self
            .basis
            .par_iter()
            .map(|e| pairing_samples(&u, e, self.rule) * self.p)
            .collect();
        DVector::from_vec(g)
    }

    /// Back to monomial coefficients.
    pub fn to_poly(&self, b: &DVector<C64>) -> Poly {
        Poly::new(
            b.iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64).sqrt())
                .collect(),
        )
    }
}

/// Minimizes `||f||_p` over polynomials of degree `D` with `phi_i(f) = y_i`.
///
/// Projected gradient in the `A^2`-orthonormal monomial basis, started from
/// the minimal-`A^2`-norm solution, with Barzilai-Borwein trial steps and
/// Armijo backtracking.
pub fn brute_force_min_norm(
    p: f64,
    constraints: &[(FunctionalSpec, C64)],
    cfg: &OracleConfig,
) -> Result<OracleSolution> {
    brute_force_min_norm_from(p, constraints, cfg, None)
}

/// As [`brute_force_min_norm`], started from the projection of `start` onto
/// the constraint set instead of the minimal-`A^2`-norm point.
pub fn brute_force_min_norm_from(
    p: f64,
    constraints: &[(FunctionalSpec, C64)],
    cfg: &OracleConfig,
    start: Option<&Poly>,
) -> Result<OracleSolution> {
    if !(p >= MIN_ORACLE_P && p.is_finite()) {
        return Err(Error::Domain(format!("the oracle needs {MIN_ORACLE_P} <= p < inf, got {p}")));
    }
    if constraints.is_empty() {
        return Err(Error::InsufficientData("at least one constraint is required".into()));
    }
    let d = cfg.truncation_degree;
    let top = constraints.iter().map(|(s, _)| s.order).max().unwrap_or(0);
    if d < top + 4 {
        return Err(Error::Validation(format!(
            "truncation degree {d} must be at least the highest constrained order {top} plus 4"
        )));
    }
    let a = DMatrix::from_fn(constraints.len(), d + 1, |i, k| {
        constraints[i].0.on_monomial(k) * ((k + 1) as f64).sqrt()
    });
    let y = DVector::from_iterator(constraints.len(), constraints.iter().map(|(_, v)| *v));
    let null = null_space_basis(&a, RANK_TOL)?;
    if null.ncols() != d + 1 - constraints.len() {
        return Err(Error::Domain("constraints are linearly dependent on the search space".into()));
    }
    let mut b = least_squares(&a, &y, RANK_TOL)?;
    if (&a * &b - &y).norm() > 1e-9 * y.norm().max(1.0) {
        return Err(Error::Domain("constraints are inconsistent".into()));
    }
    if let Some(f) = start {
        let s = DVector::from_fn(d + 1, |k, _| f.coeff(k) / ((k + 1) as f64).sqrt());
        b += &null * (null.adjoint() * (s - &b));
    }

    let obj = NormObjective::new(p, d, &cfg.rule);
    let project = |g: &DVector<C64>| &null * (null.adjoint() * g);
    let samples = obj.samples(&b);
    let mut value = obj.value_from_samples(&samples);
    let mut grad = project(&obj.gradient_from_samples(&samples));
    let mut alpha = 1.0 / grad.norm().max(1e-300);
    let mut prev: Option<(DVector<C64>, DVector<C64>)> = None;

    for iter in 0..cfg.max_iters {
        let gnorm2 = grad.norm_squared();
        if gnorm2 == 0.0 {
            return Ok(finish(&obj, &b, value, p, iter));
        }
        if let Some((db, dg)) = &prev {
            let sy = db.dotc(dg).re;
            if sy > 0.0 {
                alpha = db.norm_squared() / sy;
            }
        }
        let (next, next_samples, next_value) = loop {
            let cand = &b - &grad * C64::new(alpha, 0.0);
            let s = obj.samples(&cand);
            let v = obj.value_from_samples(&s);
            if v <= value - ARMIJO * alpha * gnorm2 {
                break (cand, s, v);
            }
            alpha /= 2.0;
            if alpha * grad.norm() < f64::EPSILON * b.norm() {
                // No representable descent left: the iterate is optimal to
                // working precision.
                return Ok(finish(&obj, &b, value, p, iter));
            }
        };
        let next_grad = project(&obj.gradient_from_samples(&next_samples));
        let step = (&next - &b).norm();
        let decrease = value - next_value;
        prev = Some((&next - &b, &next_grad - &grad));
        b = next;
        value = next_value;
        grad = next_grad;
        if step <= cfg.step_tol * b.norm().max(1.0) && decrease <= cfg.objective_tol * value {
            return Ok(finish(&obj, &b, value, p, iter + 1));
        }
    }
    Err(Error::NoConvergence(format!(
        "projected gradient did not meet its tolerances in {} iterations",
        cfg.max_iters
    )))
}

fn finish(obj: &NormObjective, b: &DVector<C64>, value: f64, p: f64, iterations: usize) -> OracleSolution {
    OracleSolution { coeffs: obj.to_poly(b), norm: value.powf(1.0 / p), iterations }
}

/// Unit-norm `f` vanishing on `zeros` with the largest derivative of order
/// `d_0` (the multiplicity at the origin, usually 0) at the origin.
pub fn brute_force_canonical(p: f64, zeros: &ZeroSet, cfg: &OracleConfig) -> Result<CanonicalOracle> {
    let lead = zeros.origin_order();
    let mut constraints = Vec::new();
    for &(z, d) in zeros.entries() {
        for k in 0..d {
            constraints.push((FunctionalSpec::derivative(z, k)?, C64::new(0.0, 0.0)));
        }
    }
    constraints.push((FunctionalSpec::derivative(C64::new(0.0, 0.0), lead)?, C64::new(1.0, 0.0)));
    let sol = brute_force_min_norm(p, &constraints, cfg)?;
    Ok(CanonicalOracle {
        coeffs: sol.coeffs.scale(C64::new(1.0 / sol.norm, 0.0)),
        leading_value: 1.0 / sol.norm,
        leading_order: lead,
        iterations: sol.iterations,
    })
}

/// How far unit-norm `F` is from being extremal for `phi = <., k>`.
///
/// For the extremal function, `∫ h |F|^(p-1) conj(sgn F) dσ = phi(h) / ||phi||`
/// for every `h`, with `||phi|| = phi(F)`. Returns the largest violation over
/// the orthonormal monomials `sqrt(j+1) z^j`, `j <= 10`.
pub fn extremality_defect(
    f: &(impl DiscFunction + ?Sized),
    p: f64,
    k: &(impl DiscFunction + ?Sized),
    rule: &DiscRule,
) -> f64 {
    let fs = f.sample(rule);
    let ks = k.sample(rule);
    let u = signed_power_samples(&fs, p);
    let phi_norm = pairing_samples(&fs, &ks, rule).re;
    let nodes = rule.nodes();
    let mut powers = vec![C64::new(1.0, 0.0); nodes.len()];
    let mut worst: f64 = 0.0;
    for j in 0..=DEFECT_DEGREE {
        let h: Vec<C64> = powers.iter().map(|z| z * ((j + 1) as f64).sqrt()).collect();
        let lhs = pairing_samples(&h, &u, rule);
        let rhs = pairing_samples(&h, &ks, rule) / phi_norm;
        worst = worst.max((lhs - rhs).norm());
        for (zk, n) in powers.iter_mut().zip(nodes) {
            *zk *= n.z;
        }
    }
    worst
}

/// `||f||_p` of oracle output, for comparisons on a different rule.
pub fn oracle_norm(f: &Poly, p: f64, rule: &DiscRule) -> f64 {
    ap_norm_samples(&f.sample(rule), p, rule)
}
