//! Polynomial roots: Aberth–Ehrlich simultaneous iteration, with the
//! eigenvalues of the companion matrix as a fallback.

use nalgebra::DMatrix;

use super::Poly;
use crate::error::{Error, Result};
use crate::C64;

const MAX_ABERTH_ITERS: usize = 500;

/// All roots of `p`, repeated according to multiplicity.
pub fn roots(p: &Poly) -> Result<Vec<C64>> {
    let Some(degree) = p.degree() else {
        return Err(Error::Domain("roots of the zero polynomial".into()));
    };
    if degree == 0 {
        return Ok(Vec::new());
    }
    // Zero roots first; the remaining polynomial has a nonzero constant term.
    let lead_zeros = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = Poly::new(p.coeffs()[lead_zeros..].to_vec());
    let mut out = vec![C64::new(0.0, 0.0); lead_zeros];
    if reduced.degree() == Some(0) {
        return Ok(out);
    }
    let found = match aberth(&reduced) {
        Some(r) => r,
        None => companion_roots(&reduced)?,
    };
    out.extend(found);
    Ok(out)
}

fn aberth(p: &Poly) -> Option<Vec<C64>> {
    let n = p.degree()?;
    let dp = p.derivative();
    let coeffs = p.coeffs();
    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli, rotated off the real axis to break symmetry.
    let radius = (coeffs[0].norm() / coeffs[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            C64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..MAX_ABERTH_ITERS {
        let mut max_rel = 0.0f64;
        for i in 0..n {
            let pv = p.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                return None;
            }
            z[i] -= step;
            max_rel = max_rel.max(step.norm() / z[i].norm().max(1e-300));
        }
        if max_rel < 1e-15 {
            return Some(z);
        }
    }
    // Accept a stalled iteration only if the residuals are at rounding level.
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let ok = z.iter().all(|&r| {
        let bound: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
            .sum();
        p.eval(r).norm() <= 1e-10 * bound.max(scale)
    });
    ok.then_some(z)
}

fn companion_roots(p: &Poly) -> Result<Vec<C64>> {
    let n = p.degree().unwrap_or(0);
    let lead = p.coeffs()[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -p.coeffs()[n - 1 - j] / lead
        } else if j + 1 == i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    m.schur()
        .eigenvalues()
        .map(|ev| ev.iter().copied().collect())
        .ok_or_else(|| Error::NoConvergence("companion matrix eigenvalues".into()))
}

/// Groups roots closer than `tol` (relative to `max(1, |root|)`) into
/// clusters, returning each cluster's centroid and size.
pub fn cluster_roots(roots: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for &r in roots {
        match clusters
            .iter_mut()
            .find(|(c, _)| (*c - r).norm() <= tol * r.norm().max(1.0))
        {
            Some((c, k)) => {
                *c = (*c * *k as f64 + r) / (*k as f64 + 1.0);
                *k += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters
}
