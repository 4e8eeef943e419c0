//! Integration over the unit disc against normalized area measure.
//!
//! A [`DiscRule`] is a product rule: Gauss–Legendre in `u = r^2` (so that
//! `dσ = du dθ / 2π`) times the uniform trapezoid rule in the angle. Polynomials
//! in `|z|^2` of degree up to `2 n_radial - 1` integrate exactly, and the
//! trapezoid rule is exact for trigonometric polynomials of degree below
//! `n_angular`.
//!
//! Sums are pairwise over a fixed node order, so results do not depend on how
//! many threads sampled the integrand.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::{Poly, RationalRep};
use crate::C64;

/// Default radial node count.
pub const DEFAULT_RADIAL: usize = 64;
/// Default angular node count.
pub const DEFAULT_ANGULAR: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub z: C64,
    pub weight: f64,
}

/// Product quadrature rule for normalized area measure on the disc.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscRule {
    radial: Vec<(f64, f64)>,
    n_angular: usize,
    nodes: Vec<Node>,
}

/// Rule size as it appears in CLI flags and JSON (`[n_radial, n_angular]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct RuleSize {
    pub n_radial: usize,
    pub n_angular: usize,
}

impl From<(usize, usize)> for RuleSize {
    fn from((n_radial, n_angular): (usize, usize)) -> Self {
        RuleSize { n_radial, n_angular }
    }
}

impl From<RuleSize> for (usize, usize) {
    fn from(s: RuleSize) -> Self {
        (s.n_radial, s.n_angular)
    }
}

impl Default for RuleSize {
    fn default() -> Self {
        RuleSize { n_radial: DEFAULT_RADIAL, n_angular: DEFAULT_ANGULAR }
    }
}

impl Default for DiscRule {
    fn default() -> Self {
        make_rule(DEFAULT_RADIAL, DEFAULT_ANGULAR).expect("default rule sizes are valid")
    }
}

/// Builds the product rule; requires `n_radial >= 4` and `n_angular >= 8`.
pub fn make_rule(n_radial: usize, n_angular: usize) -> Result<DiscRule> {
    if n_radial < 4 || n_angular < 8 {
        return Err(Error::Domain(format!(
            "rule needs n_radial >= 4 and n_angular >= 8, got {n_radial}x{n_angular}"
        )));
    }
    let radial: Vec<(f64, f64)> = gauss_legendre(n_radial)
        .into_iter()
        .map(|(x, w)| (((x + 1.0) / 2.0).sqrt(), w / 2.0))
        .collect();
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    for &(r, w) in &radial {
        for k in 0..n_angular {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_angular as f64;
            nodes.push(Node { z: C64::from_polar(r, theta), weight: w / n_angular as f64 });
        }
    }
    Ok(DiscRule { radial, n_angular, nodes })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

impl DiscRule {
    pub fn size(&self) -> RuleSize {
        RuleSize { n_radial: self.radial.len(), n_angular: self.n_angular }
    }

    pub fn from_size(size: RuleSize) -> Result<Self> {
        make_rule(size.n_radial, size.n_angular)
    }

    /// `(r, w)` pairs in ascending radius; `w` sums to one.
    pub fn radial(&self) -> &[(f64, f64)] {
        &self.radial
    }

    pub fn n_angular(&self) -> usize {
        self.n_angular
    }

    /// Nodes in radial-major order: index `i * n_angular + k` is radius `i`, angle `k`.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn angle(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.n_angular as f64
    }

    /// Weighted sum of samples taken at [`DiscRule::nodes`].
    pub fn integrate(&self, samples: &[C64]) -> C64 {
        assert_eq!(samples.len(), self.nodes.len(), "one sample per node");
        let weighted: Vec<C64> = samples
            .iter()
            .zip(&self.nodes)
            .map(|(s, n)| s * n.weight)
            .collect();
        pairwise_sum(&weighted)
    }

    pub fn integrate_real(&self, samples: &[f64]) -> f64 {
        assert_eq!(samples.len(), self.nodes.len(), "one sample per node");
        let weighted: Vec<f64> = samples
            .iter()
            .zip(&self.nodes)
            .map(|(s, n)| s * n.weight)
            .collect();
        pairwise_sum_real(&weighted)
    }

    /// Integrates a closure; convenient for non-analytic integrands.
    pub fn integrate_fn(&self, f: impl Fn(C64) -> C64 + Sync) -> C64 {
        let samples: Vec<C64> = self.nodes.par_iter().map(|n| f(n.z)).collect();
        self.integrate(&samples)
    }
}

pub(crate) fn pairwise_sum(v: &[C64]) -> C64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub(crate) fn pairwise_sum_real(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum_real(a) + pairwise_sum_real(b)
}

/// Anything that can be sampled on the disc.
///
/// `sample` defaults to pointwise evaluation; fractional powers override it to
/// continue their branch along rays.
pub trait DiscFunction: Sync {
    fn value(&self, z: C64) -> C64;

    fn sample(&self, rule: &DiscRule) -> Vec<C64> {
        rule.nodes().par_iter().map(|n| self.value(n.z)).collect()
    }
}

impl<F: Fn(C64) -> C64 + Sync> DiscFunction for F {
    fn value(&self, z: C64) -> C64 {
        self(z)
    }
}

impl DiscFunction for Poly {
    fn value(&self, z: C64) -> C64 {
        self.eval(z)
    }
}

impl DiscFunction for RationalRep {
    fn value(&self, z: C64) -> C64 {
        self.eval(z)
    }
}

/// `sum_i c_i f_i`, sampled term by term.
pub struct LinearCombination<'a> {
    terms: Vec<(C64, &'a dyn DiscFunction)>,
}

impl<'a> LinearCombination<'a> {
    pub fn new() -> Self {
        LinearCombination { terms: Vec::new() }
    }

    pub fn with(mut self, c: C64, f: &'a dyn DiscFunction) -> Self {
        self.terms.push((c, f));
        self
    }
}

impl Default for LinearCombination<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl DiscFunction for LinearCombination<'_> {
    fn value(&self, z: C64) -> C64 {
        self.terms.iter().map(|(c, f)| c * f.value(z)).sum()
    }

    fn sample(&self, rule: &DiscRule) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); rule.nodes().len()];
        for (c, f) in &self.terms {
            for (o, s) in out.iter_mut().zip(f.sample(rule)) {
                *o += c * s;
            }
        }
        out
    }
}

/// `∫ f conj(g) dσ`.
pub fn pairing(f: &(impl DiscFunction + ?Sized), g: &(impl DiscFunction + ?Sized), rule: &DiscRule) -> C64 {
    pairing_samples(&f.sample(rule), &g.sample(rule), rule)
}

pub fn pairing_samples(f: &[C64], g: &[C64], rule: &DiscRule) -> C64 {
    let prod: Vec<C64> = f.iter().zip(g).map(|(a, b)| a * b.conj()).collect();
    rule.integrate(&prod)
}

/// `(∫ |f|^p dσ)^(1/p)`.
pub fn ap_norm(f: &(impl DiscFunction + ?Sized), p: f64, rule: &DiscRule) -> f64 {
    ap_norm_samples(&f.sample(rule), p, rule)
}

pub fn ap_norm_samples(samples: &[C64], p: f64, rule: &DiscRule) -> f64 {
    let powered: Vec<f64> = samples.iter().map(|s| s.norm().powf(p)).collect();
    rule.integrate_real(&powered).powf(1.0 / p)
}

/// `|F|^(p-1) sgn F` pointwise, zero where `|F| < 1e-300`.
pub fn signed_power_samples(samples: &[C64], p: f64) -> Vec<C64> {
    samples
        .iter()
        .map(|&f| {
            let m = f.norm();
            if m < 1e-300 {
                C64::new(0.0, 0.0)
            } else {
                f * m.powf(p - 2.0)
            }
        })
        .collect()
}

/// Taylor coefficients `(k+1) ∫ u conj(z^k) dσ`, `k = 0..=degree`, of the
/// Bergman projection of `u`, from samples of `u`.
pub fn projection_coeffs(samples: &[C64], degree: usize, rule: &DiscRule) -> Vec<C64> {
    let mut out = Vec::with_capacity(degree + 1);
    let mut powers: Vec<C64> = vec![C64::new(1.0, 0.0); rule.nodes().len()];
    for k in 0..=degree {
        let prod: Vec<C64> = samples
            .iter()
            .zip(&powers)
            .map(|(u, zk)| u * zk.conj())
            .collect();
        out.push(rule.integrate(&prod) * (k + 1) as f64);
        for (zk, n) in powers.iter_mut().zip(rule.nodes()) {
            *zk *= n.z;
        }
    }
    out
}

/// Numeric Bergman projection of `u`, truncated at `degree`.
pub fn numeric_projection(u: &(impl DiscFunction + ?Sized), degree: usize, rule: &DiscRule) -> Poly {
    Poly::new(projection_coeffs(&u.sample(rule), degree, rule))
}

/// `|∫ f conj(g) - ∫ f conj(P g)|` for analytic `f`, with `P g` truncated at `degree`.
pub fn dual_pairing_check(
    f: &(impl DiscFunction + ?Sized),
    g: &(impl DiscFunction + ?Sized),
    degree: usize,
    rule: &DiscRule,
) -> f64 {
    let fs = f.sample(rule);
    let gs = g.sample(rule);
    let pg = Poly::new(projection_coeffs(&gs, degree, rule));
    let lhs = pairing_samples(&fs, &gs, rule);
    let rhs = pairing_samples(&fs, &pg.sample(rule), rule);
    (lhs - rhs).norm()
}
