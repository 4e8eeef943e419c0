//! Canonical divisors for finite zero sets, cross-checked against the
//! brute-force optimizer.

use bergman::divisor::{canonical_divisor, validate_residues, ZeroSet};
use bergman::extremal::SolveOptions;
use bergman::oracle::{brute_force_canonical, OracleConfig};
use bergman::C64;

fn main() -> bergman::Result<()> {
    let opts = SolveOptions::default();
    let cfg = OracleConfig::default().with_degree(20);
    let cases = [
        (2.0, vec![(C64::new(0.5, 0.0), 1)]),
        (2.0, vec![(C64::new(0.0, 0.0), 1), (C64::new(0.0, 0.6), 2)]),
        (4.0, vec![(C64::new(0.3, 0.0), 1), (C64::new(0.0, -0.4), 1)]),
        (6.0, vec![(C64::new(0.25, 0.0), 1), (C64::new(0.0, 0.5), 1)]),
    ];
    for (p, zeros) in cases {
        let zeros = ZeroSet::new(zeros)?;
        let sol = canonical_divisor(p, &zeros, &opts)?;
        let oracle = brute_force_canonical(p, &zeros, &cfg)?;
        println!("p = {p}, zeros {:?}", zeros.entries());
        println!("  G^({})(0)   {:.12}", sol.leading_order, sol.leading_value);
        println!("  oracle      {:.12}", oracle.leading_value);
        println!("  residues    {:.2e}", validate_residues(&sol.ansatz)?);
        println!("  offending   {:.2e}", sol.report.certificate.max_offending_coefficient);
        println!("  condition   {:.3e}", sol.condition);
    }
    println!("sqrt(7)/4 = {:.12}", 7f64.sqrt() / 4.0);
    Ok(())
}
