//! Value types for the functions the solvers manipulate: polynomials,
//! rational functions in the pole basis `1/(1 - conj(a) z)^k`, and
//! fractional powers of those.
//!
//! Everything here is an immutable value; operations are pure.

mod poly;
mod power;
mod rational;
pub mod roots;

pub use poly::Poly;
pub use power::PowerRep;
pub use rational::{partial_fractions_shifted_monomial, PoleTerm, RationalRep};

use crate::C64;

/// Coefficients at or below this magnitude are dropped from representations.
pub const NEGLIGIBLE: f64 = 1e-14;

/// Base points closer than this are treated as the same point.
const POINT_TOL: f64 = 1e-14;

pub(crate) fn same_point(a: C64, b: C64) -> bool {
    (a - b).norm() <= POINT_TOL
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rising factorial `k (k+1) ... (k+m-1)`.
pub fn rising(k: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (k + i) as f64)
}

pub fn factorial(n: usize) -> f64 {
    rising(1, n)
}

/// Best rational approximation `num/den` of `x` with `den <= max_den`,
/// accepted only when it matches `x` within `1e-12`.
pub fn small_rational(x: f64, max_den: u64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    // Continued-fraction convergents.
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let (h2, k2) = (a as i64 * h1 + h0, a as i64 * k1 + k0);
        if k2 as u64 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some((h1, k1 as u64));
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(rising(3, 2), 12.0);
        assert_eq!(factorial(5), 120.0);
    }

    #[test]
    fn rationals() {
        assert_eq!(small_rational(0.5, 64), Some((1, 2)));
        assert_eq!(small_rational(2.0 / 3.0, 64), Some((2, 3)));
        assert_eq!(small_rational(1.5, 64), Some((3, 2)));
        assert_eq!(small_rational(3.0, 64), Some((3, 1)));
        assert_eq!(small_rational(std::f64::consts::PI, 64), None);
    }
}
