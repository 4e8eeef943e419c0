//! Bergman projections in closed form against quadrature.

use bergman::funcrep::Poly;
use bergman::projection::{kernel_of, project_monomial, FunctionalSpec};
use bergman::quadrature::{numeric_projection, pairing, DiscRule};
use bergman::series::{beta_power, beta_roundtrip_defect, TruncatedSeries};
use bergman::C64;

fn main() -> bergman::Result<()> {
    let rule = DiscRule::default();

    println!("P(z^m conj(z)^n): closed form vs quadrature");
    for (m, n) in [(3, 1), (5, 5), (2, 4)] {
        let exact = project_monomial(m, n);
        let numeric = numeric_projection(&move |z: C64| z.powi(m as i32) * z.conj().powi(n as i32), 10, &rule);
        let err = (0..=10).map(|k| (exact.coeff(k) - numeric.coeff(k)).norm()).fold(0.0, f64::max);
        println!("  m = {m}, n = {n}: {:?}  error {err:.1e}", exact.coeffs());
    }

    println!("reproducing kernels");
    let f = Poly::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-1.0, 0.5), C64::new(0.3, 0.0)]);
    let a = C64::new(0.4, -0.3);
    for order in 0..3 {
        let k = kernel_of(&FunctionalSpec::derivative(a, order)?)?;
        let direct = f.nth_derivative(order).eval(a);
        println!("  f^({order})(a) = {direct:.12}, <f, k> = {:.12}", pairing(&f, &k, &rule));
    }

    println!("fractional powers of series");
    let h = TruncatedSeries::new(vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.25)])?;
    let root = beta_power(&h, 0.5, C64::new(1.0, 0.0))?;
    println!("  sqrt(1 + z/2 + i z^2/4) = {:?}", &root.coeffs()[..3]);
    println!("  round-trip defect at p = 4/3: {:.1e}", beta_roundtrip_defect(&h, 4.0 / 3.0)?);
    Ok(())
}
