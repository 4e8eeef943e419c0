//! The brute-force optimizer on its own: minimal norms over polynomials of
//! growing degree.

use bergman::oracle::{brute_force_min_norm, OracleConfig};
use bergman::projection::FunctionalSpec;
use bergman::C64;

fn main() -> bergman::Result<()> {
    let origin = C64::new(0.0, 0.0);
    let constraints = [
        (FunctionalSpec::derivative(origin, 0)?, C64::new(1.0, 0.0)),
        (FunctionalSpec::derivative(origin, 1)?, C64::new(0.5, 0.0)),
    ];
    println!("p = 4, f(0) = 1, f'(0) = 1/2; exact (3/2)^(1/4) = {:.10}", 1.5f64.powf(0.25));
    for d in [8, 16, 24, 32] {
        let sol = brute_force_min_norm(4.0, &constraints, &OracleConfig::default().with_degree(d))?;
        println!("  D = {d:>2}: norm {:.10} after {} iterations", sol.norm, sol.iterations);
    }
    let constraints = [
        (FunctionalSpec::derivative(origin, 0)?, C64::new(1.0, 0.0)),
        (FunctionalSpec::averaged_integral(C64::new(0.0, 0.7))?, C64::new(0.0, 0.0)),
    ];
    let sol = brute_force_min_norm(3.0, &constraints, &OracleConfig::default())?;
    println!("p = 3, f(0) = 1 and (1/a) ∫_0^a f = 0 at a = 0.7i: norm {:.10}", sol.norm);
    Ok(())
}
