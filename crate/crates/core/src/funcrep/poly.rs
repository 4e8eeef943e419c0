use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::NEGLIGIBLE;
use crate::C64;

/// Polynomial with complex coefficients; `coeffs()[k]` multiplies `z^k`.
///
/// Trailing coefficients of magnitude at most [`NEGLIGIBLE`] are trimmed, so
/// the zero polynomial has an empty coefficient vector and no degree.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<C64>", into = "Vec<C64>")]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl From<Vec<C64>> for Poly {
    fn from(coeffs: Vec<C64>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<C64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() <= NEGLIGIBLE) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// `c * z^n`
    pub fn monomial(n: usize, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, order: usize) -> Poly {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Coefficients of `h -> p(w + h)`, i.e. the Taylor expansion at `w`.
    pub fn shifted(&self, w: C64) -> Poly {
        // Repeated synthetic division (Horner shift).
        let mut out = self.coeffs.clone();
        let n = out.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let upper = out[j + 1];
                out[j] += w * upper;
            }
        }
        Poly::new(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(Poly::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).degree(), Some(0));
        assert_eq!(Poly::new(vec![c(0.0, 0.0)]).degree(), None);
        assert!(Poly::zero().is_zero());
    }

    #[test]
    fn z_squared_at_i() {
        let p = Poly::monomial(2, c(1.0, 0.0));
        assert!((p.eval(c(0.0, 1.0)) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_cube() {
        let p = Poly::monomial(3, c(1.0, 0.0)).derivative();
        assert_eq!(p, Poly::monomial(2, c(3.0, 0.0)));
    }

    #[test]
    fn product_of_linear_factors() {
        let p = &Poly::from_real(&[1.0, 1.0]) * &Poly::from_real(&[1.0, -1.0]);
        assert_eq!(p, Poly::from_real(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = Poly::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.25, 1.0), c(0.0, -3.0)]);
        let w = c(0.3, -0.2);
        let q = p.shifted(w);
        for h in [c(0.1, 0.0), c(-0.2, 0.4), c(0.0, 0.0)] {
            assert!((q.eval(h) - p.eval(w + h)).norm() < 1e-14);
        }
    }
}
