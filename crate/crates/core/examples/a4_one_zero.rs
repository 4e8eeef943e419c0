//! One-zero extremal problem in `A^4`: generate data from a known solution,
//! then recover it.

use bergman::extremal::{a4_forward, a4_residue_equation, a4_solve_c, solve_a4_one_zero, SolveOptions};
use bergman::C64;

fn main() -> bergman::Result<()> {
    let opts = SolveOptions::default();
    for (a, b) in [(C64::new(0.5, 0.0), C64::new(0.0, 0.0)), (C64::new(0.3, 0.4), C64::new(0.1, -0.05))] {
        let c = a4_solve_c(a, b);
        let (v1, v2) = a4_forward(a, b, c);
        println!("a = {a}, b = {b}, c = {c:.6}");
        println!("  residue equation  {:.2e}", a4_residue_equation(a, b, c).norm());
        println!("  data v1 = {v1:.9}, v2 = {v2:.9}");
        let sol = solve_a4_one_zero(v1, v2, &opts)?;
        let (w1, w2) = a4_forward(sol.a, sol.b, sol.c);
        println!("  recovered a = {:.9}, b = {:.9}, c = {:.9}", sol.a, sol.b, sol.c);
        println!("  data error        {:.2e}", (w1 - v1).norm().max((w2 - v2).norm()));
        println!("  norm              {:.12}", sol.report.norm);
        println!("  offending         {:.2e}", sol.report.certificate.max_offending_coefficient);
        println!("  other roots       {}", sol.alternates.len());
    }
    Ok(())
}
