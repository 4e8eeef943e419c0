//! Minimal-norm interpolation at the origin.
//!
//! Prescribing `f(0) = 1, f'(0) = 1/2` in `A^4` gives `F = (1 + z)^(1/2)`;
//! prescribing two derivatives gives the square root of a quadratic.

use bergman::extremal::{solve_origin_interpolation, InterpolationProblem, SolveOptions};
use bergman::C64;

fn main() -> bergman::Result<()> {
    let opts = SolveOptions::default();

    let prob = InterpolationProblem::new(4.0, vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0)])?;
    let sol = solve_origin_interpolation(&prob, &opts)?;
    println!("p = 4, (c0, c1) = (1, 1/2)");
    println!("  base      {:?}", sol.f.base().poly().coeffs());
    println!("  exponent  {}", sol.f.exponent());
    println!("  norm      {:.12}  ((3/2)^(1/4) = {:.12})", sol.norm, 1.5f64.powf(0.25));
    println!("  offending {:.2e}", sol.certificate.max_offending_coefficient);

    let (p, c1, c2) = (3.0, C64::new(0.2, 0.1), C64::new(-0.1, 0.05));
    let prob = InterpolationProblem::new(p, vec![C64::new(1.0, 0.0), c1, c2])?;
    let sol = solve_origin_interpolation(&prob, &opts)?;
    let second = sol.f.base().poly().coeff(2) * 2.0;
    let expect = c1 * c1 * (p * (p - 2.0) / 4.0) + c2 * (p / 2.0);
    println!("p = 3, quadratic data");
    println!("  f''(0)    {second:.12}  (closed form {expect:.12})");
    println!("  norm      {:.12}", sol.norm);
    println!("  offending {:.2e}", sol.certificate.max_offending_coefficient);
    for w in &sol.warnings {
        println!("  warning: {w}");
    }
    Ok(())
}
