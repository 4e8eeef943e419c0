//! Symbolic Bergman projections and the kernels of derivative-evaluation and
//! averaged-integral functionals.
//!
//! Conventions: the kernel `k` of a functional `phi` satisfies
//! `phi(f) = ∫ f conj(k) dσ`, so scaling `phi` by `c` scales `k` by `conj(c)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::{binomial, factorial, partial_fractions_shifted_monomial};
use crate::funcrep::{PoleTerm, Poly, PowerRep, RationalRep};
use crate::quadrature::{projection_coeffs, signed_power_samples, DiscFunction, DiscRule};
use crate::series::TruncatedSeries;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    /// `f -> f^(n)(a)`
    DerivativeEval,
    /// `f -> (1/a) ∫_0^a f(z) dz`
    AveragedIntegral,
}

/// `coefficient` times a derivative evaluation or an averaged integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct FunctionalSpec {
    pub kind: FunctionalKind,
    pub point: C64,
    pub order: usize,
    pub coefficient: C64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: FunctionalKind,
    point: C64,
    #[serde(default)]
    order: usize,
    #[serde(default = "one")]
    coefficient: C64,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

impl TryFrom<RawSpec> for FunctionalSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        FunctionalSpec::new(r.kind, r.point, r.order, r.coefficient)
    }
}

impl From<FunctionalSpec> for RawSpec {
    fn from(s: FunctionalSpec) -> Self {
        RawSpec { kind: s.kind, point: s.point, order: s.order, coefficient: s.coefficient }
    }
}

impl FunctionalSpec {
    pub fn new(kind: FunctionalKind, point: C64, order: usize, coefficient: C64) -> Result<Self> {
        if !point.is_finite() || point.norm() >= 1.0 {
            return Err(Error::Domain(format!("functional point must lie in the open disc, got {point}")));
        }
        if kind == FunctionalKind::AveragedIntegral && point.norm() == 0.0 {
            return Err(Error::Domain("averaged integral needs a nonzero point".into()));
        }
        if !coefficient.is_finite() {
            return Err(Error::Domain("functional coefficient must be finite".into()));
        }
        Ok(FunctionalSpec { kind, point, order, coefficient })
    }

    /// `f -> f^(n)(a)`.
    pub fn derivative(point: C64, order: usize) -> Result<Self> {
        FunctionalSpec::new(FunctionalKind::DerivativeEval, point, order, one())
    }

    pub fn averaged_integral(point: C64) -> Result<Self> {
        FunctionalSpec::new(FunctionalKind::AveragedIntegral, point, 0, one())
    }

    /// The functional applied to `z^k`.
    pub fn on_monomial(&self, k: usize) -> C64 {
        let a = self.point;
        let raw = match self.kind {
            FunctionalKind::DerivativeEval => {
                let n = self.order;
                if k < n {
                    C64::new(0.0, 0.0)
                } else {
                    a.powi((k - n) as i32) * (factorial(k) / factorial(k - n))
                }
            }
            FunctionalKind::AveragedIntegral => a.powi(k as i32) / (k + 1) as f64,
        };
        self.coefficient * raw
    }

    pub fn apply_poly(&self, f: &Poly) -> C64 {
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * self.on_monomial(k))
            .sum()
    }
}

/// Kernel of a functional in the polynomial + pole basis.
pub fn kernel_of(spec: &FunctionalSpec) -> Result<RationalRep> {
    let c = spec.coefficient.conj();
    let a = spec.point;
    match spec.kind {
        FunctionalKind::AveragedIntegral => RationalRep::pole(a, 1, c),
        FunctionalKind::DerivativeEval => Ok(derivative_kernel(a, spec.order)?.scale(c)),
    }
}

/// `(n+1)! z^n / (1 - conj(a) z)^(n+2)`, the kernel of `f -> f^(n)(a)`.
fn derivative_kernel(a: C64, n: usize) -> Result<RationalRep> {
    let scale = factorial(n + 1);
    if a.norm() == 0.0 {
        return Ok(Poly::monomial(n, C64::new(scale, 0.0)).into());
    }
    let terms = partial_fractions_shifted_monomial(n, a)?
        .into_iter()
        .map(|(order, b)| PoleTerm::new(a, order, b * scale))
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalRep::new(Poly::zero(), terms))
}

/// `P(z^m conj(z)^n)`.
pub fn project_monomial(m: usize, n: usize) -> Poly {
    if m < n {
        return Poly::zero();
    }
    let c = (m - n + 1) as f64 / (m + 1) as f64;
    Poly::monomial(m - n, C64::new(c, 0.0))
}

/// `P(f conj(g))` for a polynomial `f`, from the Taylor data of `g` at 0.
pub fn project_poly_conj(f: &Poly, g: &TruncatedSeries) -> Result<Poly> {
    let Some(deg) = f.degree() else {
        return Ok(Poly::zero());
    };
    let gc = g.coeffs();
    if gc.len() < deg + 1 {
        return Err(Error::InsufficientData(format!(
            "need {} Taylor coefficients of g, got {}",
            deg + 1,
            gc.len()
        )));
    }
    let mut out = vec![C64::new(0.0, 0.0); deg + 1];
    for (n, fc) in f.coeffs().iter().enumerate() {
        for (j, slot) in out.iter_mut().enumerate().take(n + 1) {
            *slot += fc * gc[n - j].conj() * ((j + 1) as f64 / (n + 1) as f64);
        }
    }
    let out = Poly::new(out);
    assert!(out.degree().is_none_or(|d| d <= deg));
    Ok(out)
}

/// Taylor coefficient below this (relative to the largest) counts as zero when
/// reading off the order of a zero of `g`.
const ZERO_ORDER_TOL: f64 = 1e-11;

/// `P(k conj(g))` for a kernel `k` without order-1 pole terms.
///
/// `g_taylor(w, n)` must return the Taylor coefficients `g_0..g_n` of `g` at
/// `w`; it is called at the origin when `k` has a polynomial part and at every
/// base point of `k`.
pub fn project_kernel_conj(
    k: &RationalRep,
    g_taylor: impl Fn(C64, usize) -> Result<Vec<C64>>,
) -> Result<RationalRep> {
    let mut out = RationalRep::default();
    if let Some(deg) = k.poly().degree() {
        let g0 = TruncatedSeries::new(g_taylor(C64::new(0.0, 0.0), deg)?)?;
        out = out.add(&project_poly_conj(k.poly(), &g0)?.into());
    }
    for a in k.base_points() {
        let block = k.terms_at(a);
        if block.contains_key(&1) {
            return Err(Error::Domain(
                "order-1 pole terms are not kernels of derivative evaluations".into(),
            ));
        }
        let top = *block.keys().next_back().expect("base point has terms");
        let n_max = top - 2;
        let lambda = derivative_weights(a, &block)?;
        // Extra coefficients only set the scale for the zero-order test.
        let mut gt = g_taylor(a, n_max + 8)?;
        if gt.len() < n_max + 1 {
            return Err(Error::InsufficientData(format!(
                "need {} Taylor coefficients of g at {a}",
                n_max + 1
            )));
        }
        let scale = gt.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let zero_order = gt.iter().take_while(|c| c.norm() <= ZERO_ORDER_TOL * scale).count();
        for c in gt.iter_mut().take(zero_order) {
            *c = C64::new(0.0, 0.0);
        }
        // mu_l = sum_{i >= l} lambda_i C(i, l) g^(i-l)(a)
        let mut piece = RationalRep::default();
        for l in 0..=n_max {
            let mu: C64 = (l..=n_max)
                .map(|i| lambda[i] * binomial(i, l) * gt[i - l] * factorial(i - l))
                .sum();
            if mu.norm() > 0.0 {
                piece = piece.add(&derivative_kernel(a, l)?.scale(mu.conj()));
            }
        }
        let new_top = piece.terms_at(a).keys().next_back().copied();
        assert!(new_top.is_none_or(|t| t + zero_order <= top));
        out = out.add(&piece);
    }
    Ok(out)
}

/// Weights `lambda_i` with `sum_i conj(lambda_i) kernel_i = block`, where
/// `kernel_i` is the kernel of `f -> f^(i)(a)`; the functional with kernel
/// `block` is then `f -> sum_i lambda_i f^(i)(a)`.
fn derivative_weights(a: C64, block: &BTreeMap<usize, C64>) -> Result<Vec<C64>> {
    let top = *block.keys().next_back().expect("nonempty block");
    let n_max = top - 2;
    let mut remaining: Vec<C64> = (0..=top).map(|o| block.get(&o).copied().unwrap_or_default()).collect();
    let mut kappa = vec![C64::new(0.0, 0.0); n_max + 1];
    for i in (0..=n_max).rev() {
        let ki = derivative_kernel(a, i)?;
        let at = ki.terms_at(a);
        let lead = at[&(i + 2)];
        kappa[i] = remaining[i + 2] / lead;
        for (&o, &c) in &at {
            remaining[o] -= kappa[i] * c;
        }
    }
    Ok(kappa.into_iter().map(|c| c.conj()).collect())
}

/// Result of projecting `|F|^(p-1) sgn F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignedProjection {
    Symbolic(RationalRep),
    Numeric(Poly),
}

/// `P(|F|^(p-1) sgn f) = P(F^(p/2) conj(F^(p/2 - 1)))`.
///
/// Symbolic when `p` is an even integer and `F^(p/2)` is rational; otherwise
/// the numeric projection truncated at `degree`.
pub fn project_signed_power(f: &PowerRep, p: f64, rule: &DiscRule, degree: usize) -> Result<SignedProjection> {
    if let Some(r) = symbolic_signed_power(f, p)? {
        return Ok(SignedProjection::Symbolic(r));
    }
    let samples = f.sample(rule);
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::Branch { re: f64::NAN, im: f64::NAN });
    }
    let u = signed_power_samples(&samples, p);
    Ok(SignedProjection::Numeric(Poly::new(projection_coeffs(&u, degree, rule))))
}

/// `F^m` as a rational function when `t m` is a nonnegative integer.
pub fn rational_power(f: &PowerRep, m: usize) -> Option<RationalRep> {
    let tm = f.exponent() * m as f64;
    if tm < 0.0 || (tm - tm.round()).abs() > 1e-12 {
        return None;
    }
    let n = tm.round() as usize;
    let kappa = f.anchor().powi(m as i32) / f.leading_base_coefficient().powi(n as i32);
    Some(f.base().pow(n).scale(kappa))
}

fn symbolic_signed_power(f: &PowerRep, p: f64) -> Result<Option<RationalRep>> {
    if (p - p.round()).abs() > 1e-12 || p.round() < 2.0 || p.round() as i64 % 2 != 0 {
        return Ok(None);
    }
    let m = (p.round() / 2.0) as usize;
    let Some(r) = rational_power(f, m) else {
        return Ok(None);
    };
    let scale = r
        .terms()
        .iter()
        .map(|t| t.coef.norm())
        .chain(r.poly().coeffs().iter().map(|c| c.norm()))
        .fold(0.0, f64::max);
    // Residue-free up to rounding is required; strip the rounding.
    let mut terms = Vec::new();
    for t in r.terms() {
        if t.order == 1 {
            if t.coef.norm() > 1e-9 * scale {
                return Ok(None);
            }
            continue;
        }
        terms.push(*t);
    }
    let r = RationalRep::new(r.poly().clone(), terms);
    let g = f.pow(m - 1);
    let taylor = |w: C64, n: usize| -> Result<Vec<C64>> {
        if m == 1 {
            let mut v = vec![C64::new(0.0, 0.0); n + 1];
            v[0] = C64::new(1.0, 0.0);
            return Ok(v);
        }
        g.taylor_at(w, n)
    };
    project_kernel_conj(&r, taylor).map(Some)
}
