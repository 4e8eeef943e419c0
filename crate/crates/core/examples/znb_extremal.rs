//! Extremal functions for the kernel `z^N + b`.

use bergman::extremal::{solve_linear_extremal_znb, SolveOptions};
use bergman::oracle::extremality_defect;
use bergman::funcrep::Poly;
use bergman::C64;

fn main() -> bergman::Result<()> {
    let opts = SolveOptions::default();
    println!("{:>6} {:>2} {:>14} {:>12} {:>10} {:>10}", "p", "N", "b", "a", "offending", "defect");
    for p in [4.0 / 3.0, 3.0, 4.0, 6.0] {
        for (n, b) in [(1, C64::new(2.0, 0.0)), (2, C64::new(0.0, 1.8)), (3, C64::new(-2.5, 0.0))] {
            let sol = solve_linear_extremal_znb(p, n, b, &opts)?;
            let mut k = vec![C64::new(0.0, 0.0); n + 1];
            k[0] = b;
            k[n] = C64::new(1.0, 0.0);
            let defect = extremality_defect(&sol.report.f, p, &Poly::new(k), &opts.rule);
            println!(
                "{p:>6.3} {n:>2} {:>14} {:>12.8} {:>10.2e} {:>10.2e}",
                format!("{b}"),
                sol.a.norm(),
                sol.report.certificate.max_offending_coefficient,
                defect
            );
        }
    }
    Ok(())
}
