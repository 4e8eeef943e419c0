use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{RationalRep, NEGLIGIBLE};
use crate::error::{Error, Result};
use crate::quadrature::{DiscFunction, DiscRule};
use crate::series::{beta_power, TruncatedSeries};
use crate::C64;

/// Radius inside which `base / z^k` is evaluated from its Taylor series.
const SERIES_RADIUS: f64 = 0.2;
const SERIES_DEGREE: usize = 48;
const MAX_ORIGIN_ORDER: usize = 32;
/// Tracking gives up once a step shrinks below this length.
const MIN_STEP: f64 = 1e-14;
/// A base value below this (relative to `max(1, |h(0)|)`) is treated as a zero.
const ZERO_TOL: f64 = 1e-13;
/// Paths along which `|base|` dips below this (relative) are not trusted.
const NEAR_ZERO: f64 = 1e-8;

/// `base^t`, continued analytically from `anchor` along straight paths from 0.
///
/// When `base` vanishes to order `k` at the origin, `t k` must be a
/// nonnegative integer; the function is `z^(t k) H(z)` where `H` continues
/// `(base / z^k)^t` from `H(0) = anchor`. For `k = 0` this is the usual
/// `F(0) = anchor`. Zeros of `base` elsewhere in the disc are crossed only when
/// the two ways around them agree.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawPower", into = "RawPower")]
pub struct PowerRep {
    base: RationalRep,
    exponent: f64,
    anchor: C64,
    origin_order: usize,
    /// Taylor coefficients of `base / z^k` at 0; empty when `k = 0`.
    origin_series: Vec<C64>,
    h0: C64,
}

impl PartialEq for PowerRep {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.exponent == other.exponent && self.anchor == other.anchor
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPower {
    base: RationalRep,
    exponent: f64,
    anchor: C64,
}

impl TryFrom<RawPower> for PowerRep {
    type Error = Error;
    fn try_from(r: RawPower) -> Result<Self> {
        PowerRep::new(r.base, r.exponent, r.anchor)
    }
}

impl From<PowerRep> for RawPower {
    fn from(p: PowerRep) -> Self {
        RawPower { base: p.base, exponent: p.exponent, anchor: p.anchor }
    }
}

impl PowerRep {
    pub fn new(base: RationalRep, exponent: f64, anchor: C64) -> Result<Self> {
        Self::build(base, exponent, Some(anchor), None)
    }

    /// Like [`PowerRep::new`], but with the order of the zero of `base` at the
    /// origin given; the first `k` Taylor coefficients must be below `1e-9`
    /// relative to the largest and are then treated as exact zeros.
    pub fn with_origin_order(base: RationalRep, exponent: f64, anchor: C64, k: usize) -> Result<Self> {
        Self::build(base, exponent, Some(anchor), Some(k))
    }

    /// Zero of order `k` at the origin and the real positive anchor
    /// `|h(0)|^t`, taken from the same expansion the evaluator uses.
    pub fn positive_with_origin_order(base: RationalRep, exponent: f64, k: usize) -> Result<Self> {
        Self::build(base, exponent, None, Some(k))
    }

    fn build(base: RationalRep, exponent: f64, anchor: Option<C64>, order: Option<usize>) -> Result<Self> {
        if !exponent.is_finite() || !anchor.is_none_or(|a| a.is_finite()) {
            return Err(Error::Domain("exponent and anchor must be finite".into()));
        }
        let taylor = base.taylor_at_origin(SERIES_DEGREE + MAX_ORIGIN_ORDER);
        let coeffs = taylor.coeffs();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::Domain("base of a power must not vanish identically".into()));
        }
        let k = match order {
            None => coeffs
                .iter()
                .take_while(|c| c.norm() <= NEGLIGIBLE * scale.max(1.0))
                .count(),
            Some(k) => {
                if coeffs.iter().take(k).any(|c| c.norm() > 1e-9 * scale) {
                    return Err(Error::Domain(format!("base does not vanish to order {k} at 0")));
                }
                k
            }
        };
        if k > MAX_ORIGIN_ORDER {
            return Err(Error::Domain("base vanishes to too high an order at the origin".into()));
        }
        if k > 0 {
            let tk = exponent * k as f64;
            if tk < 0.0 || (tk - tk.round()).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "base has a zero of order {k} at 0 but t k = {tk} is not a nonnegative integer"
                )));
            }
        }
        let h0 = coeffs[k];
        let expected = h0.norm().powf(exponent);
        let anchor = anchor.unwrap_or(C64::new(expected, 0.0));
        if (anchor.norm() - expected).abs() > 1e-12 * expected.max(1.0) {
            return Err(Error::Domain(format!(
                "anchor modulus {} does not match |base(0)|^t = {expected}",
                anchor.norm()
            )));
        }
        let origin_series = if k > 0 {
            coeffs[k..k + SERIES_DEGREE + 1].to_vec()
        } else {
            Vec::new()
        };
        Ok(PowerRep { base, exponent, anchor, origin_order: k, origin_series, h0 })
    }

    /// Principal branch at the origin.
    pub fn principal(base: RationalRep, exponent: f64) -> Result<Self> {
        let taylor = base.taylor_at_origin(8);
        let h0 = taylor
            .coeffs()
            .iter()
            .copied()
            .find(|c| c.norm() > NEGLIGIBLE)
            .unwrap_or_default();
        PowerRep::new(base, exponent, h0.powf(exponent))
    }

    pub fn base(&self) -> &RationalRep {
        &self.base
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn anchor(&self) -> C64 {
        self.anchor
    }

    /// First nonzero Taylor coefficient of `base` at the origin.
    pub fn leading_base_coefficient(&self) -> C64 {
        self.h0
    }

    /// Order of the zero of `base` at the origin.
    pub fn origin_order(&self) -> usize {
        self.origin_order
    }

    /// `F^m` on the branch continued from `anchor^m`.
    pub fn pow(&self, m: usize) -> PowerRep {
        PowerRep {
            exponent: self.exponent * m as f64,
            anchor: self.anchor.powi(m as i32),
            ..self.clone()
        }
    }

    /// `lambda F` for real `lambda > 0`.
    pub fn scale_positive(&self, lambda: f64) -> Result<PowerRep> {
        if lambda.is_nan() || lambda <= 0.0 || self.exponent == 0.0 {
            return Err(Error::Domain("scale_positive needs lambda > 0 and t != 0".into()));
        }
        let s = lambda.powf(1.0 / self.exponent);
        PowerRep::new(self.base.scale(C64::new(s, 0.0)), self.exponent, self.anchor * lambda)
    }

    /// `|F(z)| = |base(z)|^t`; needs no branch.
    pub fn modulus(&self, z: C64) -> f64 {
        self.base.eval(z).norm().powf(self.exponent)
    }

    fn integer_exponent(&self) -> Option<i32> {
        let t = self.exponent;
        ((t - t.round()).abs() < 1e-15 && t.abs() < 64.0).then(|| t.round() as i32)
    }

    /// `base(w) / w^k`.
    fn h(&self, w: C64) -> C64 {
        let k = self.origin_order;
        if k == 0 {
            return self.base.eval(w);
        }
        if w.norm() <= SERIES_RADIUS {
            return self
                .origin_series
                .iter()
                .rev()
                .fold(C64::new(0.0, 0.0), |acc, &c| acc * w + c);
        }
        self.base.eval(w) / w.powi(k as i32)
    }

    fn is_zero_value(&self, hv: C64) -> bool {
        hv.norm() <= ZERO_TOL * self.h0.norm().max(1.0)
    }

    /// Rebuilds `F(z)` from the continued `log(h / h(0))`; only its imaginary
    /// part is trusted, the modulus is recomputed from `h(z)`.
    fn assemble(&self, z: C64, hz: C64, log_ratio: C64) -> C64 {
        let t = self.exponent;
        let modulus = (hz.norm() / self.h0.norm()).powf(t);
        let phase = C64::from_polar(1.0, t * log_ratio.im);
        let zk = if self.origin_order == 0 {
            C64::new(1.0, 0.0)
        } else {
            z.powi((t * self.origin_order as f64).round() as i32)
        };
        self.anchor * zk * phase * modulus
    }

    /// Continues `log(h / h(0))` along the segment `from -> to`. Returns the
    /// value and `h(to)`, or `None` if the path runs into a zero of `h`.
    fn track(&self, from: C64, to: C64, log_from: C64, h_from: C64) -> Option<(C64, C64)> {
        let delta = to - from;
        let len = delta.norm();
        if len == 0.0 {
            return Some((log_from, h_from));
        }
        // Passing closer than this to a zero leaves the side undetermined, so
        // the path is refused. Near `to` the bound shrinks with `|h(to)|` so
        // that endpoints close to a zero stay reachable.
        let near_zero = (NEAR_ZERO * self.h0.norm().max(1.0)).min(self.h(to).norm() * 1e-3);
        let (mut s, mut ds) = (0.0f64, 1.0f64);
        let (mut log, mut hc) = (log_from, h_from);
        while s < 1.0 {
            ds = ds.min(1.0 - s);
            if ds < MIN_STEP {
                return None;
            }
            let hm = self.h(from + delta * (s + ds / 2.0));
            let end = if s + ds >= 1.0 { to } else { from + delta * (s + ds) };
            let hn = self.h(end);
            let (r1, r2) = (hm / hc, hn / hm);
            if (r1 - 1.0).norm() <= 0.5 && (r2 - 1.0).norm() <= 0.5 {
                if hm.norm() < near_zero || (s + ds < 1.0 && hn.norm() < near_zero) {
                    return None;
                }
                log += r1.ln() + r2.ln();
                hc = hn;
                s += ds;
                ds *= 2.0;
            } else {
                ds /= 2.0;
            }
        }
        Some((log, hc))
    }

    fn track_polyline(&self, points: &[C64]) -> Option<(C64, C64)> {
        let mut log = C64::new(0.0, 0.0);
        let mut hv = self.h0;
        for w in points.windows(2) {
            (log, hv) = self.track(w[0], w[1], log, hv)?;
        }
        Some((log, hv))
    }

    /// Value at `z`, continued along the segment `0 -> z`.
    ///
    /// A zero of `base` on the segment is bypassed on both sides; the results
    /// must agree, which happens exactly when `t` times its order is an integer.
    pub fn eval_power(&self, z: C64) -> Result<C64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
        }
        if let Some(n) = self.integer_exponent() {
            return Ok(self.anchor / self.h0.powi(n) * self.base.eval(z).powi(n));
        }
        if z.norm() == 0.0 {
            return Ok(if self.origin_order > 0 { C64::new(0.0, 0.0) } else { self.anchor });
        }
        let hz = self.h(z);
        if self.is_zero_value(hz) {
            if self.exponent > 0.0 {
                return Ok(C64::new(0.0, 0.0));
            }
            return Err(Error::Branch { re: z.re, im: z.im });
        }
        let zero = C64::new(0.0, 0.0);
        if let Some((log, hv)) = self.track_polyline(&[zero, z]) {
            return Ok(self.assemble(z, hv, log));
        }
        self.eval_by_detours(z)
    }

    fn eval_by_detours(&self, z: C64) -> Result<C64> {
        let zero = C64::new(0.0, 0.0);
        let perp = z * C64::new(0.0, 1.0);
        for eta in [0.25, 0.125, 0.375] {
            let plus = self.track_polyline(&[zero, z / 2.0 + perp * eta, z]);
            let minus = self.track_polyline(&[zero, z / 2.0 - perp * eta, z]);
            if let (Some((lp, hp)), Some((lm, hm))) = (plus, minus) {
                let (fp, fm) = (self.assemble(z, hp, lp), self.assemble(z, hm, lm));
                if (fp - fm).norm() <= 1e-9 * fp.norm().max(1e-300) {
                    return Ok(fp);
                }
                return Err(Error::Branch { re: z.re, im: z.im });
            }
        }
        Err(Error::Branch { re: z.re, im: z.im })
    }

    /// Values on one ray `r_i e^(i theta)`, radii ascending, continuing the
    /// branch from one radius to the next.
    pub fn sample_ray(&self, theta: f64, radii: &[f64]) -> Vec<C64> {
        if self.integer_exponent().is_some() {
            return radii
                .iter()
                .map(|&r| self.value(C64::from_polar(r, theta)))
                .collect();
        }
        let mut out = Vec::with_capacity(radii.len());
        let mut prev = C64::new(0.0, 0.0);
        let mut state = Some((C64::new(0.0, 0.0), self.h0));
        for &r in radii {
            let z = C64::from_polar(r, theta);
            let hz = self.h(z);
            if self.is_zero_value(hz) {
                out.push(self.value(z));
                state = None;
                prev = z;
                continue;
            }
            state = state.and_then(|(log, hv)| self.track(prev, z, log, hv));
            match state {
                Some((log, hv)) => out.push(self.assemble(z, hv, log)),
                None => out.push(self.value(z)),
            }
            if state.is_none() {
                // Resynchronize from a pointwise evaluation.
                state = self.track_polyline(&[C64::new(0.0, 0.0), z]);
                if state.is_none() {
                    if let Ok(v) = self.eval_by_detours(z) {
                        state = self.log_from_value(z, hz, v);
                    }
                }
            }
            prev = z;
        }
        out
    }

    /// Recovers the continued log ratio at `z` from a known value `F(z)`.
    fn log_from_value(&self, z: C64, hz: C64, v: C64) -> Option<(C64, C64)> {
        let t = self.exponent;
        if t == 0.0 {
            return None;
        }
        let zk = if self.origin_order == 0 {
            C64::new(1.0, 0.0)
        } else {
            z.powi((t * self.origin_order as f64).round() as i32)
        };
        let unit = v / (self.anchor * zk);
        let re = (hz.norm() / self.h0.norm()).ln();
        Some((C64::new(re, unit.arg() / t), hz))
    }

    /// Taylor coefficients of `h -> F(w + h)` up to `h^n`.
    ///
    /// At a zero of `base` of order `m` the expansion starts at `h^(t m)`,
    /// which must be an integer power; the leading coefficient's phase is
    /// read off from `F` near `w`.
    pub fn taylor_at(&self, w: C64, n: usize) -> Result<Vec<C64>> {
        let t = self.exponent;
        let raw = self.base.taylor_at(w, n + 16);
        let scale = raw.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        let m = raw.iter().take_while(|c| c.norm() <= 1e-12 * scale).count();
        if m > 16 {
            return Err(Error::Domain("base vanishes to high order at the expansion point".into()));
        }
        let lead_power = t * m as f64;
        if m > 0 && (lead_power < 0.0 || (lead_power - lead_power.round()).abs() > 1e-9) {
            return Err(Error::Branch { re: w.re, im: w.im });
        }
        let shift = lead_power.round() as usize;
        let u0 = raw[m];
        let normalized: Vec<C64> = raw[m..m + n + 1].iter().map(|c| c / u0).collect();
        let unit_power = beta_power(&TruncatedSeries::new(normalized)?, t, C64::new(1.0, 0.0))?;
        let alpha = if m == 0 {
            self.eval_power(w)?
        } else {
            self.leading_coefficient(w, m, shift, &unit_power)?
        };
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        for (j, c) in unit_power.coeffs().iter().enumerate() {
            if j + shift <= n {
                out[j + shift] = alpha * c;
            }
        }
        Ok(out)
    }

    fn leading_coefficient(
        &self,
        w: C64,
        m: usize,
        shift: usize,
        unit_power: &TruncatedSeries,
    ) -> Result<C64> {
        let t = self.exponent;
        let u0 = self.base.taylor_at(w, m)[m];
        let target = u0.norm().powf(t);
        let dir = if w.norm() > 0.0 { -w / w.norm() } else { C64::new(1.0, 0.0) };
        let mut delta = 0.05 * (1.0 - w.norm()).max(1e-3);
        for _ in 0..30 {
            let probe = w + dir * delta;
            let series_val = unit_power.eval(dir * delta);
            let f = self.eval_power(probe)?;
            let alpha = f / ((dir * delta).powi(shift as i32) * series_val);
            // The truncated series is only trusted where it is close to 1.
            if (series_val - 1.0).norm() < 0.5 && (alpha.norm() - target).abs() <= 1e-6 * target {
                return Ok(C64::from_polar(target, alpha.arg()));
            }
            delta /= 2.0;
        }
        Err(Error::Branch { re: w.re, im: w.im })
    }
}

impl DiscFunction for PowerRep {
    /// `NaN` where the branch cannot be continued; use [`PowerRep::eval_power`]
    /// to see the error.
    fn value(&self, z: C64) -> C64 {
        self.eval_power(z).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn sample(&self, rule: &DiscRule) -> Vec<C64> {
        let radii: Vec<f64> = rule.radial().iter().map(|&(r, _)| r).collect();
        let na = rule.n_angular();
        let rays: Vec<Vec<C64>> = (0..na)
            .into_par_iter()
            .map(|k| self.sample_ray(rule.angle(k), &radii))
            .collect();
        let mut out = Vec::with_capacity(radii.len() * na);
        for i in 0..radii.len() {
            for ray in &rays {
                out.push(ray[i]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{PoleTerm, Poly};
    use crate::quadrature::make_rule;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sqrt_one_plus_z() -> PowerRep {
        PowerRep::new(Poly::from_real(&[1.0, 1.0]).into(), 0.5, c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn anchor_and_principal_values() {
        let f = sqrt_one_plus_z();
        assert_eq!(f.eval_power(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((f.eval_power(c(1.0, 0.0)).unwrap() - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(f.eval_power(c(-1.0, 0.0)).unwrap(), c(0.0, 0.0));
        let z = c(-0.6, 0.7);
        assert!((f.eval_power(z).unwrap() - (z + 1.0).sqrt()).norm() < 1e-14);
    }

    #[test]
    fn integer_exponent_is_ordinary_power() {
        let f = PowerRep::new(Poly::from_real(&[2.0, 1.0]).into(), 2.0, c(4.0, 0.0)).unwrap();
        assert!((f.eval_power(c(1.0, 0.0)).unwrap() - c(9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_inconsistent_anchor() {
        assert!(PowerRep::new(Poly::from_real(&[1.0, 1.0]).into(), 0.5, c(2.0, 0.0)).is_err());
        assert!(PowerRep::new(Poly::from_real(&[0.0, 1.0]).into(), 0.5, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn other_branch_is_negated() {
        let f = PowerRep::new(Poly::from_real(&[1.0, 1.0]).into(), 0.5, c(-1.0, 0.0)).unwrap();
        let z = c(0.3, -0.8);
        assert!((f.eval_power(z).unwrap() + (z + 1.0).sqrt()).norm() < 1e-14);
    }

    #[test]
    fn negative_exponent_matches_principal_power() {
        // (1 - 0.9 z)^(-3/2) has no zeros in the disc, so the principal power is exact.
        let base = RationalRep::new(Poly::from_real(&[1.0, -0.9]), vec![]);
        let f = PowerRep::new(base, -1.5, c(1.0, 0.0)).unwrap();
        for z in [c(0.9, 0.1), c(-0.2, 0.95), c(0.5, -0.5)] {
            let exact = (C64::new(1.0, 0.0) - z * 0.9).powf(-1.5);
            assert!((f.eval_power(z).unwrap() - exact).norm() < 1e-12 * exact.norm());
        }
    }

    #[test]
    fn crossing_even_order_zero_is_allowed() {
        // ((z - 0.5)^2)^(1/2) continued from 0.5 is 0.5 - z.
        let base = Poly::from_real(&[0.25, -1.0, 1.0]);
        let f = PowerRep::new(base.into(), 0.5, c(0.5, 0.0)).unwrap();
        for z in [c(1.0, 0.0), c(0.8, 0.0), c(0.7, 0.1)] {
            assert!((f.eval_power(z).unwrap() - (c(0.5, 0.0) - z)).norm() < 1e-9, "{z}");
        }
        assert_eq!(f.eval_power(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn crossing_simple_zero_is_a_branch_error() {
        let f = PowerRep::new(Poly::from_real(&[0.5, -1.0]).into(), 0.5, c(0.5f64.sqrt(), 0.0)).unwrap();
        assert!(matches!(f.eval_power(c(0.9, 0.0)), Err(Error::Branch { .. })));
        assert!(f.eval_power(c(0.9, 0.1)).is_ok());
    }

    #[test]
    fn origin_zero_is_factored_out() {
        // (z^2 (1 + z))^(1/2) = z (1 + z)^(1/2) on the branch with H(0) = 1.
        let base = Poly::from_real(&[0.0, 0.0, 1.0, 1.0]);
        let f = PowerRep::new(base.into(), 0.5, c(1.0, 0.0)).unwrap();
        assert_eq!(f.origin_order(), 2);
        for z in [c(0.1, 0.05), c(-0.7, 0.3), c(0.0, 0.0)] {
            assert!((f.eval_power(z).unwrap() - z * (z + 1.0).sqrt()).norm() < 1e-14);
        }
    }

    #[test]
    fn modulus_identity() {
        let base = RationalRep::new(
            Poly::from_real(&[1.0, 0.3]),
            vec![PoleTerm::new(c(0.4, 0.2), 2, c(0.2, -0.1)).unwrap()],
        );
        let f = PowerRep::principal(base.clone(), 2.0 / 3.0).unwrap();
        for z in [c(0.3, 0.3), c(-0.9, 0.0), c(0.0, 0.99)] {
            let v = f.eval_power(z).unwrap();
            assert!((v.norm().powf(1.5) - base.eval(z).norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn ray_sampling_matches_pointwise() {
        let base = Poly::from_real(&[0.25, -1.0, 1.0]);
        let f = PowerRep::new(base.into(), 0.5, c(0.5, 0.0)).unwrap();
        let rule = make_rule(8, 16).unwrap();
        let samples = f.sample(&rule);
        for (s, n) in samples.iter().zip(rule.nodes()) {
            assert!((s - f.eval_power(n.z).unwrap()).norm() < 1e-9, "{}", n.z);
        }
    }

    #[test]
    fn taylor_at_regular_and_zero_points() {
        let f = sqrt_one_plus_z();
        let w = c(0.2, -0.3);
        let coeffs = f.taylor_at(w, 6).unwrap();
        let h = c(0.01, 0.02);
        let approx: C64 = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * h + a);
        assert!((approx - (w + h + 1.0).sqrt()).norm() < 1e-13);

        // ((z - 0.5)^2 (1 + z))^(1/2) near its zero 0.5.
        let base = &Poly::from_real(&[0.25, -1.0, 1.0]) * &Poly::from_real(&[1.0, 1.0]);
        let g = PowerRep::new(base.into(), 0.5, c(0.5, 0.0)).unwrap();
        let w = c(0.5, 0.0);
        let coeffs = g.taylor_at(w, 8).unwrap();
        assert_eq!(coeffs[0], c(0.0, 0.0));
        let h = c(0.03, -0.01);
        let approx: C64 = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * h + a);
        assert!((approx - g.eval_power(w + h).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let f = sqrt_one_plus_z();
        let s = serde_json::to_string(&f).unwrap();
        let g: PowerRep = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(serde_json::from_str::<PowerRep>(
            r#"{"base":{"poly":[[1,0]],"terms":[]},"exponent":0.5,"anchor":[1,0],"x":1}"#
        )
        .is_err());
    }
}
