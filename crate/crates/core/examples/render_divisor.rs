//! Writes `|G|` for a canonical divisor as a PGM image.
//!
//! `cargo run --example render_divisor -- out.pgm`

use bergman::divisor::{canonical_divisor, ZeroSet};
use bergman::extremal::SolveOptions;
use bergman::render::render;
use bergman::C64;

fn main() -> bergman::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "divisor.pgm".into());
    let zeros = ZeroSet::new(vec![(C64::new(0.5, 0.0), 1), (C64::new(-0.3, 0.5), 1)])?;
    let sol = canonical_divisor(4.0, &zeros, &SolveOptions::default())?;
    let g = &sol.report.f;
    let image = render(|z| g.modulus(z), 256)?;
    std::fs::write(&path, image.to_pgm()).map_err(|e| bergman::Error::Validation(e.to_string()))?;
    println!("wrote {path}: |G| ranges over [{:.4}, {:.4}]", image.min, image.max);
    Ok(())
}
