use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{certify, AllowedSpan, SolutionReport, SolveOptions};
use crate::error::{Error, Result};
use crate::funcrep::roots::{cluster_roots, roots};
use crate::funcrep::{Poly, PowerRep, RationalRep};
use crate::quadrature::{ap_norm_samples, DiscFunction};
use crate::C64;

const N_STARTS: usize = 32;
const MAX_NEWTON: usize = 200;
const FD_STEP: f64 = 1e-7;
/// Converged when every polynomial residual is below this.
const RESIDUAL_TOL: f64 = 1e-13;
/// Newton roots closer than this (in `(a, b, c)`) are the same root.
const SAME_ROOT: f64 = 1e-7;

/// `(f'(0), f''(0))` for `f = (1/a) ((a - z)/(1 - conj(a) z)) (1 + b z + c z^2)^(1/2)`
/// on the branch with `f(0) = 1`.
pub fn a4_forward(a: C64, b: C64, c: C64) -> (C64, C64) {
    let ab = a.conj();
    let m = a.norm_sqr();
    let v1 = (a * b / 2.0 + m - 1.0) / a;
    let v2 = (b * m + a * ab * ab * 2.0 + a * c - ab * 2.0 - b - a * b * b / 4.0) / a;
    (v1, v2)
}

/// `(|a|^2 - 1)^2 (2c + conj(a) b) - 2 (|a|^2 - 1)(conj(a)^2 + c + conj(a) b)`,
/// which vanishes exactly when `f^2` has zero residue at `1/conj(a)`.
pub fn a4_residue_equation(a: C64, b: C64, c: C64) -> C64 {
    let ab = a.conj();
    let s = a.norm_sqr() - 1.0;
    (c * 2.0 + ab * b) * s * s - (ab * ab + c + ab * b) * 2.0 * s
}

/// The `c` that makes the residue vanish for given `a` (with `0 < |a| < 1`) and `b`.
pub fn a4_solve_c(a: C64, b: C64) -> C64 {
    let ab = a.conj();
    let m = a.norm_sqr();
    (ab * ab * 2.0 + ab * b * (3.0 - m)) / (2.0 * (m - 2.0))
}

/// A converged, admissible Newton root.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct A4Candidate {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub residual: f64,
    pub norm: f64,
    pub max_offending_coefficient: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct A4Solution {
    pub report: SolutionReport,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    /// `|residue of F^2 at 1/conj(a)|` from the symbolic expansion.
    pub residue: f64,
    /// Other admissible roots, certified or not.
    pub alternates: Vec<A4Candidate>,
}

/// The function `f` of `a4_forward` as a square root of a rational function.
pub fn a4_function(a: C64, b: C64, c: C64) -> Result<PowerRep> {
    let lin = Poly::new(vec![a, C64::new(-1.0, 0.0)]);
    let quad = Poly::new(vec![C64::new(1.0, 0.0), b, c]);
    let numerator = (&(&lin * &lin) * &quad).scale((a * a).inv());
    let base = RationalRep::from(numerator).mul(&RationalRep::pole(a, 2, C64::new(1.0, 0.0))?);
    PowerRep::new(base, 0.5, C64::new(1.0, 0.0))
}

/// Least-`A^4`-norm `F` with `F(0) = 1`, `F'(0) = v1`, `F''(0) = v2`, among
/// functions of the form of [`a4_function`].
///
/// Solves the two interpolation equations and the zero-residue condition
/// (divided by `|a|^2 - 1`) by damped Newton from quasi-random starts.
pub fn solve_a4_one_zero(v1: C64, v2: C64, opts: &SolveOptions) -> Result<A4Solution> {
    if !v1.is_finite() || !v2.is_finite() {
        return Err(Error::Domain("v1 and v2 must be finite".into()));
    }
    let runs: Vec<Option<([f64; 6], f64)>> = (0..N_STARTS)
        .into_par_iter()
        .map(|i| newton(start_point(i + 1), v1, v2))
        .collect();
    let mut converged: Vec<([f64; 6], f64)> = runs.into_iter().flatten().collect();
    if converged.is_empty() {
        return Err(Error::NoConvergence(format!(
            "damped Newton did not converge from any of {N_STARTS} starts"
        )));
    }
    converged.sort_by(|x, y| x.1.total_cmp(&y.1).then(abs_a(&x.0).total_cmp(&abs_a(&y.0))));
    let mut distinct: Vec<([f64; 6], f64)> = Vec::new();
    for (x, r) in converged {
        if !distinct.iter().any(|(y, _)| dist(&x, y) < SAME_ROOT) {
            distinct.push((x, r));
        }
    }
    let admissible: Vec<([f64; 6], f64)> = distinct.into_iter().filter(|(x, _)| admissible(x)).collect();
    if admissible.is_empty() {
        return Err(Error::InvalidSolution(
            "every converged root puts a zero outside 0 < |a| < 1 or a simple zero of 1 + bz + cz^2 in the disc"
                .into(),
        ));
    }

    let mut evaluated = Vec::new();
    for (x, residual) in admissible {
        let (a, b, c) = unpack(&x);
        let f = a4_function(a, b, c)?;
        let samples = f.sample(&opts.rule);
        if samples.iter().any(|s| !s.is_finite()) {
            continue;
        }
        let norm = ap_norm_samples(&samples, 4.0, &opts.rule);
        let cert = certify(&samples, norm, 4.0, AllowedSpan::PolynomialDegree(2), opts)?;
        let candidate = A4Candidate {
            a,
            b,
            c,
            residual,
            norm,
            max_offending_coefficient: cert.max_offending_coefficient,
        };
        evaluated.push((candidate, f, cert));
    }
    let best = evaluated
        .iter()
        .enumerate()
        .filter(|(_, (_, _, cert))| cert.passed())
        .min_by(|(_, x), (_, y)| x.0.norm.total_cmp(&y.0.norm))
        .map(|(i, _)| i);
    let Some(best) = best else {
        let worst = evaluated
            .iter()
            .map(|e| e.2.max_offending_coefficient)
            .fold(f64::INFINITY, f64::min);
        return Err(Error::CertificateFailed { offending: worst, tolerance: opts.cert_tol });
    };
    let (chosen, f, certificate) = evaluated.remove(best);
    let residue = f.base().residue_at_pole(chosen.a)?.norm();
    let alternates = evaluated.into_iter().map(|e| e.0).collect();
    Ok(A4Solution {
        report: SolutionReport { f, norm: chosen.norm, certificate, warnings: Vec::new() },
        a: chosen.a,
        b: chosen.b,
        c: chosen.c,
        residue,
        alternates,
    })
}

fn unpack(x: &[f64; 6]) -> (C64, C64, C64) {
    (C64::new(x[0], x[1]), C64::new(x[2], x[3]), C64::new(x[4], x[5]))
}

fn abs_a(x: &[f64; 6]) -> f64 {
    x[0].hypot(x[1])
}

fn dist(x: &[f64; 6], y: &[f64; 6]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

fn admissible(x: &[f64; 6]) -> bool {
    let (a, b, c) = unpack(x);
    let m = a.norm();
    if !(m > 1e-9 && m < 1.0 - 1e-9) {
        return false;
    }
    let quad = Poly::new(vec![C64::new(1.0, 0.0), b, c]);
    if quad.degree().unwrap_or(0) == 0 {
        return true;
    }
    let Ok(found) = roots(&quad) else {
        return false;
    };
    cluster_roots(&found, 1e-6)
        .iter()
        .all(|&(z, mult)| z.norm() >= 1.0 - 1e-10 || mult == 2)
}

/// Residuals scaled by `a` so they are polynomial in the unknowns.
fn residuals(x: &[f64; 6], v1: C64, v2: C64) -> [f64; 6] {
    let (a, b, c) = unpack(x);
    let ab = a.conj();
    let m = a.norm_sqr();
    let e1 = a * b / 2.0 + m - 1.0 - a * v1;
    let e2 = b * m + a * ab * ab * 2.0 + a * c - ab * 2.0 - b - a * b * b / 4.0 - a * v2;
    let e3 = (c * 2.0 + ab * b) * (m - 1.0) - (ab * ab + c + ab * b) * 2.0;
    [e1.re, e1.im, e2.re, e2.im, e3.re, e3.im]
}

fn norm6(r: &[f64; 6]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn newton(mut x: [f64; 6], v1: C64, v2: C64) -> Option<([f64; 6], f64)> {
    let mut r = residuals(&x, v1, v2);
    for _ in 0..MAX_NEWTON {
        let rn = norm6(&r);
        if r.iter().all(|v| v.abs() < RESIDUAL_TOL) {
            return Some((x, rn));
        }
        let jac = DMatrix::from_fn(6, 6, |i, j| {
            let (mut xp, mut xm) = (x, x);
            xp[j] += FD_STEP;
            xm[j] -= FD_STEP;
            (residuals(&xp, v1, v2)[i] - residuals(&xm, v1, v2)[i]) / (2.0 * FD_STEP)
        });
        let rhs = DVector::from_iterator(6, r.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        let mut alpha = 1.0;
        loop {
            let mut trial = x;
            for (t, s) in trial.iter_mut().zip(step.iter()) {
                *t += alpha * s;
            }
            let rt = residuals(&trial, v1, v2);
            if norm6(&rt) < (1.0 - 1e-4 * alpha) * rn {
                x = trial;
                r = rt;
                break;
            }
            alpha /= 2.0;
            if alpha < 1e-8 {
                return None;
            }
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > 1e6) {
            return None;
        }
    }
    None
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let (mut out, mut f) = (0.0, 1.0 / base as f64);
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f /= base as f64;
    }
    out
}

/// Halton point `i` mapped to `0.05 < |a| < 0.95` and `|b|, |c| < 2`, uniform in area.
fn start_point(i: usize) -> [f64; 6] {
    let h: Vec<f64> = [2, 3, 5, 7, 11, 13].iter().map(|&b| radical_inverse(i, b)).collect();
    let tau = 2.0 * std::f64::consts::PI;
    let (r0, r1) = (0.05f64, 0.95f64);
    let ra = (r0 * r0 + h[0] * (r1 * r1 - r0 * r0)).sqrt();
    let a = C64::from_polar(ra, tau * h[1]);
    let b = C64::from_polar(2.0 * h[2].sqrt(), tau * h[3]);
    let c = C64::from_polar(2.0 * h[4].sqrt(), tau * h[5]);
    [a.re, a.im, b.re, b.im, c.re, c.im]
}
