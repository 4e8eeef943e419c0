//! `|F|` on the disc as a binary NetPBM graymap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::{PowerRep, RationalRep};
use crate::C64;

pub const MIN_GRID: usize = 16;

/// Anything whose modulus can be drawn.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Renderable {
    Power(PowerRep),
    Rational(RationalRep),
}

impl Renderable {
    pub fn modulus(&self, z: C64) -> f64 {
        match self {
            Renderable::Power(f) => f.modulus(z),
            Renderable::Rational(r) => r.eval(z).norm(),
        }
    }
}

/// Row-major pixels, row 0 at the top (`Im z` near 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Graymap {
    pub grid: usize,
    pub pixels: Vec<u8>,
    /// Extremes of `|F|` over the pixels inside the disc.
    pub min: f64,
    pub max: f64,
}

impl Graymap {
    /// P5 file contents with a `# min= max=` comment line.
    pub fn to_pgm(&self) -> Vec<u8> {
        let header = format!(
            "P5\n# |F| min={:.16e} max={:.16e}\n{} {}\n255\n",
            self.min, self.max, self.grid, self.grid
        );
        let mut out = header.into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.grid + col]
    }
}

/// Centre of pixel `(row, col)`.
pub fn pixel_point(grid: usize, row: usize, col: usize) -> C64 {
    let step = 2.0 / grid as f64;
    C64::new(-1.0 + step * (col as f64 + 0.5), 1.0 - step * (row as f64 + 0.5))
}

/// Samples `modulus` at pixel centres; pixels outside the disc are 0, the
/// rest scale linearly from `min -> 0` to `max -> 255` (all 255 if constant).
pub fn render(modulus: impl Fn(C64) -> f64, grid: usize) -> Result<Graymap> {
    if grid < MIN_GRID {
        return Err(Error::Validation(format!("grid must be at least {MIN_GRID}, got {grid}")));
    }
    let values: Vec<Option<f64>> = (0..grid * grid)
        .map(|i| {
            let z = pixel_point(grid, i / grid, i % grid);
            (z.norm() < 1.0).then(|| modulus(z))
        })
        .collect();
    let inside = values.iter().flatten().filter(|v| v.is_finite());
    let (min, max) = inside.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = max - min;
    let pixels = values
        .iter()
        .map(|v| match v {
            None => 0,
            Some(v) if !v.is_finite() => 255,
            Some(_) if span <= 0.0 => 255,
            Some(v) => (255.0 * (v - min) / span).round() as u8,
        })
        .collect();
    Ok(Graymap { grid, pixels, min, max })
}
