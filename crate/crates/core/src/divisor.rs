//! Canonical divisors for finite zero sets in `A^p`, `p` even.
//!
//! With `M = p/2`, the divisor `G` for zeros `z_n` of multiplicity `d_n` has
//! `R = G^M` equal to a constant (or `c_0 z^(M m)` plus lower powers, when the
//! origin is a zero of order `m`) plus pole blocks
//! `sum_{j < M d_n} c_nj / (1 - conj(z_n) z)^(j+2)`. Requiring `R` to vanish to
//! order `M d_n` at every `z_n` leaves a one-dimensional null space.

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{certify, AllowedSpan, SolutionReport, SolveOptions};
use crate::funcrep::{factorial, PoleTerm, Poly, PowerRep, RationalRep};
use crate::linalg::null_vector;
use crate::projection::FunctionalSpec;
use crate::quadrature::{ap_norm_samples, DiscFunction};
use crate::C64;

/// Null spaces with `sigma_second_smallest / sigma_max` below this are rejected.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

/// Distinct points of the open disc with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ZeroSet {
    entries: Vec<(C64, usize)>,
}

impl ZeroSet {
    pub fn new(entries: Vec<(C64, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("zero set must be nonempty".into()));
        }
        for (i, &(z, d)) in entries.iter().enumerate() {
            if !z.is_finite() || z.norm() >= 1.0 {
                return Err(Error::Domain(format!("zero {z} is not in the open disc")));
            }
            if d == 0 {
                return Err(Error::Domain("multiplicities must be at least 1".into()));
            }
            if entries[..i].iter().any(|&(w, _)| (w - z).norm() <= 1e-12) {
                return Err(Error::Domain(format!("zero {z} is listed twice")));
            }
        }
        Ok(ZeroSet { entries })
    }

    pub fn entries(&self) -> &[(C64, usize)] {
        &self.entries
    }

    /// Multiplicity of the zero at the origin, 0 if none.
    pub fn origin_order(&self) -> usize {
        self.entries
            .iter()
            .find(|(z, _)| z.norm() == 0.0)
            .map_or(0, |&(_, d)| d)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (C64, usize)> + '_ {
        self.entries.iter().copied().filter(|(z, _)| z.norm() > 0.0)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Pair(#[serde(deserialize_with = "crate::json::loose_complex")] C64, usize),
    Point(C64),
    Object(RawObject),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObject {
    #[serde(deserialize_with = "crate::json::loose_complex")]
    point: C64,
    #[serde(default = "one_usize")]
    multiplicity: usize,
}

fn one_usize() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawZeros {
    One(RawEntry),
    Many(Vec<RawEntry>),
}

impl From<RawEntry> for (C64, usize) {
    fn from(e: RawEntry) -> Self {
        match e {
            // `[x, 0]` cannot be a multiplicity, and `[x, k]` with `k >= 1`
            // cannot be a point of the disc.
            RawEntry::Pair(z, 0) if z.im == 0.0 => (C64::new(z.re, 0.0), 1),
            RawEntry::Pair(z, d) => (z, d),
            RawEntry::Point(z) => (z, 1),
            RawEntry::Object(o) => (o.point, o.multiplicity),
        }
    }
}

/// Accepts a single entry or a list of entries, each `[[re, im], d]`,
/// a bare point `[re, im]` of multiplicity 1, or
/// `{"point": [re, im], "multiplicity": d}`.
impl<'de> Deserialize<'de> for ZeroSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries: Vec<(C64, usize)> = match RawZeros::deserialize(d)? {
            RawZeros::One(e) => vec![e.into()],
            RawZeros::Many(v) => v.into_iter().map(Into::into).collect(),
        };
        ZeroSet::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Coefficients of `c_nj / (1 - conj(z_n) z)^(j+2)`, `j = 0..M d_n - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleBlock {
    pub point: C64,
    pub multiplicity: usize,
    pub coeffs: Vec<C64>,
}

/// `R = G^M` in the residue-free form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorAnsatz {
    #[serde(rename = "M")]
    pub m: usize,
    pub c0: C64,
    /// Coefficients of `z^j`, `j < M d_1`, when the origin is a zero of
    /// order `d_1`; `c0` then multiplies `z^(M d_1)`.
    pub origin_block: Option<Vec<C64>>,
    pub pole_blocks: Vec<PoleBlock>,
}

impl DivisorAnsatz {
    pub fn to_rational(&self) -> Result<RationalRep> {
        let poly = match &self.origin_block {
            None => Poly::constant(self.c0),
            Some(low) => {
                let mut c = low.clone();
                c.push(self.c0);
                Poly::new(c)
            }
        };
        let mut terms = Vec::new();
        for block in &self.pole_blocks {
            for (j, &c) in block.coeffs.iter().enumerate() {
                terms.push(PoleTerm::new(block.point, j + 2, c)?);
            }
        }
        Ok(RationalRep::new(poly, terms))
    }

    fn from_vector(m: usize, zeros: &ZeroSet, x: &[C64]) -> Self {
        let d1 = zeros.origin_order();
        let mut it = x.iter().copied();
        let (c0, origin_block) = if d1 == 0 {
            (it.next().expect("c0"), None)
        } else {
            let low: Vec<C64> = it.by_ref().take(m * d1).collect();
            (it.next().expect("c0"), Some(low))
        };
        let pole_blocks = zeros
            .nonzero()
            .map(|(point, d)| PoleBlock { point, multiplicity: d, coeffs: it.by_ref().take(m * d).collect() })
            .collect();
        DivisorAnsatz { m, c0, origin_block, pole_blocks }
    }

    fn scaled(&self, s: C64) -> Self {
        DivisorAnsatz {
            m: self.m,
            c0: self.c0 * s,
            origin_block: self.origin_block.as_ref().map(|v| v.iter().map(|c| c * s).collect()),
            pole_blocks: self
                .pole_blocks
                .iter()
                .map(|b| PoleBlock { coeffs: b.coeffs.iter().map(|c| c * s).collect(), ..b.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DivisorSolution {
    /// `F` is the divisor `G`.
    pub report: SolutionReport,
    pub ansatz: DivisorAnsatz,
    /// Order of the zero at the origin.
    pub leading_order: usize,
    /// `G^(m)(0)` for that order `m`; `G(0)` when the origin is not a zero.
    pub leading_value: f64,
    /// Singular values of the scaled system, padded square, descending.
    pub singular_values: Vec<f64>,
    /// `sigma_max / sigma_second_smallest`.
    pub condition: f64,
    /// Largest `|R^(k)(z_n)| / k!` for `k < M d_n`, relative to the largest
    /// ansatz coefficient.
    pub zero_residual: f64,
    pub residue_defect: f64,
}

impl DivisorSolution {
    pub fn certificate_passed(&self) -> bool {
        self.report.certificate.passed()
    }
}

/// Basis function `u` of the ansatz, in column order.
fn basis(m: usize, zeros: &ZeroSet) -> Result<Vec<RationalRep>> {
    let mut cols = Vec::new();
    let d1 = zeros.origin_order();
    if d1 == 0 {
        cols.push(Poly::constant(C64::new(1.0, 0.0)).into());
    } else {
        for j in 0..=m * d1 {
            cols.push(Poly::monomial(j, C64::new(1.0, 0.0)).into());
        }
    }
    for (z, d) in zeros.nonzero() {
        for j in 0..m * d {
            cols.push(RationalRep::pole(z, j + 2, C64::new(1.0, 0.0))?);
        }
    }
    Ok(cols)
}

/// Rows `R^(k)(z_n) / k! = 0`, `k < M d_n`, from exact symbolic derivatives.
fn system(m: usize, zeros: &ZeroSet, cols: &[RationalRep]) -> DMatrix<C64> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for &(z, d) in zeros.entries() {
        for k in 0..m * d {
            rows.push(
                cols.iter()
                    .map(|u| u.derivative(k).eval(z) / factorial(k))
                    .collect(),
            );
        }
    }
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| rows[i][j])
}

/// `||R||_{A^2}^2 = sum_m |R_m|^2 / (m+1)` from Taylor coefficients.
fn a2_norm_sq(r: &RationalRep) -> f64 {
    let rho = r.terms().iter().map(|t| t.a.norm()).fold(0.0, f64::max);
    let top = r.terms().iter().map(|t| t.order).max().unwrap_or(0);
    // Coefficients decay like m^(top-1) rho^m.
    let mut n = 64usize;
    while n < 20000 && (n as f64).powi(top as i32) * rho.powi(n as i32) > 1e-20 {
        n *= 2;
    }
    let n = n.max(r.poly().degree().unwrap_or(0) + 1);
    r.taylor_at_origin(n)
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm_sqr() / (k + 1) as f64)
        .sum()
}

/// Canonical divisor for `zeros` in `A^p`.
pub fn canonical_divisor(p: f64, zeros: &ZeroSet, opts: &SolveOptions) -> Result<DivisorSolution> {
    if (p - p.round()).abs() > 1e-12 || p.round() < 2.0 || p.round() as i64 % 2 != 0 {
        return Err(Error::Domain(format!("canonical divisors need an even integer p >= 2, got {p}")));
    }
    let m = (p.round() / 2.0) as usize;
    let cols = basis(m, zeros)?;
    let a = system(m, zeros, &cols);

    // Equilibrate rows, then columns.
    let mut scaled = a.clone();
    for mut row in scaled.row_iter_mut() {
        let s = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            row /= C64::new(s, 0.0);
        }
    }
    let col_scale: Vec<f64> = scaled
        .column_iter()
        .map(|col| col.iter().map(|c| c.norm()).fold(0.0, f64::max))
        .map(|s| if s > 0.0 { 1.0 / s } else { 1.0 })
        .collect();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= C64::new(col_scale[j], 0.0);
    }
    let (y, singular_values) = null_vector(&scaled, DEGENERACY_THRESHOLD)?;
    let n = cols.len();
    let condition = if n >= 2 { singular_values[0] / singular_values[n - 2] } else { 1.0 };
    let x: Vec<C64> = y.iter().zip(&col_scale).map(|(v, s)| v * *s).collect();

    let d1 = zeros.origin_order();
    let ansatz = DivisorAnsatz::from_vector(m, zeros, &x);
    let r = ansatz.to_rational()?;
    let lead_index = m * d1;
    let lead = r.taylor_at_origin(lead_index).coeffs()[lead_index];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidSolution("ansatz vanishes at the origin beyond the prescribed order".into()));
    }
    // Unit norm, and a positive leading coefficient.
    let norm_r = a2_norm_sq(&r).sqrt();
    let unit = lead.conj() / lead.norm();
    let ansatz = ansatz.scaled(unit / norm_r);
    let r = ansatz.to_rational()?;

    let t = 1.0 / m as f64;
    let g = PowerRep::positive_with_origin_order(r.clone(), t, lead_index)?;
    let anchor = g.anchor();

    let zero_residual = zero_residual(&r, m, zeros, &ansatz);
    check_exact_orders(&r, m, zeros)?;
    let residue_defect = validate_residues(&ansatz)?;

    let samples = g.sample(&opts.rule);
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::Branch { re: f64::NAN, im: f64::NAN });
    }
    let norm = ap_norm_samples(&samples, p, &opts.rule);
    let mut specs = Vec::new();
    for k in 0..=d1 {
        specs.push(FunctionalSpec::derivative(C64::new(0.0, 0.0), k)?);
    }
    for (z, d) in zeros.nonzero() {
        for k in 0..d {
            specs.push(FunctionalSpec::derivative(z, k)?);
        }
    }
    let certificate = certify(&samples, norm, p, AllowedSpan::Kernels(specs), opts)?.require()?;
    let leading_value = factorial(d1) * anchor.re;
    Ok(DivisorSolution {
        report: SolutionReport { f: g, norm, certificate, warnings: Vec::new() },
        ansatz,
        leading_order: d1,
        leading_value,
        singular_values,
        condition,
        zero_residual,
        residue_defect,
    })
}

fn zero_residual(r: &RationalRep, m: usize, zeros: &ZeroSet, ansatz: &DivisorAnsatz) -> f64 {
    let scale = ansatz
        .pole_blocks
        .iter()
        .flat_map(|b| b.coeffs.iter())
        .chain(std::iter::once(&ansatz.c0))
        .chain(ansatz.origin_block.iter().flatten())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for &(z, d) in zeros.entries() {
        for v in r.taylor_at(z, m * d - 1) {
            worst = worst.max(v.norm() / scale);
        }
    }
    worst
}

/// The zero at each `z_n` must have order exactly `M d_n`.
fn check_exact_orders(r: &RationalRep, m: usize, zeros: &ZeroSet) -> Result<()> {
    for &(z, d) in zeros.entries() {
        let t = r.taylor_at(z, m * d + 4);
        let scale = t.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        let local = t[m * d..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if t[m * d].norm() <= 1e-8 * local.max(scale) {
            return Err(Error::InvalidSolution(format!(
                "ansatz vanishes to order above {} at {z}",
                m * d
            )));
        }
    }
    Ok(())
}

/// Largest residue of the expanded ansatz at its poles, recovered by contour
/// integration; zero when there are no pole blocks.
pub fn validate_residues(ansatz: &DivisorAnsatz) -> Result<f64> {
    contour_residues(&ansatz.to_rational()?)
}

/// Largest `|(1/2πi) ∮ f dz|` over circles around the poles of `f`
/// (256-node trapezoid rule).
pub fn contour_residues(f: &RationalRep) -> Result<f64> {
    let poles: Vec<C64> = f.base_points().iter().map(|a| a.conj().inv()).collect();
    let mut worst = 0.0f64;
    for (i, &c) in poles.iter().enumerate() {
        let nearest = poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &q)| (q - c).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = if nearest.is_finite() { nearest / 2.0 } else { c.norm() / 2.0 };
        let nodes = 256;
        let sum: C64 = (0..nodes)
            .map(|k| {
                let w = C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / nodes as f64);
                f.eval(c + w) * w
            })
            .sum();
        worst = worst.max((sum / nodes as f64).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn zeros(v: &[(C64, usize)]) -> ZeroSet {
        ZeroSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn one_zero_a2_closed_form() {
        let opts = SolveOptions::default();
        let sol = canonical_divisor(2.0, &zeros(&[(c(0.5, 0.0), 1)]), &opts).unwrap();
        assert!((sol.leading_value - 7f64.sqrt() / 4.0).abs() < 1e-12, "{}", sol.leading_value);
        let an = &sol.ansatz;
        assert!((an.c0 - c(4.0 / 7f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((an.pole_blocks[0].coeffs[0] - c(-9.0 / (4.0 * 7f64.sqrt()), 0.0)).norm() < 1e-12);
        for a in [0.2, 0.5, 0.8] {
            let sol = canonical_divisor(2.0, &zeros(&[(c(a, 0.0), 1)]), &opts).unwrap();
            let expect = (1.0 - (1.0 - a * a).powi(2)).sqrt();
            assert!((sol.leading_value - expect).abs() < 1e-10, "a = {a}");
        }
    }

    #[test]
    fn origin_zero_a2_is_scaled_z() {
        let sol = canonical_divisor(2.0, &zeros(&[(c(0.0, 0.0), 1)]), &SolveOptions::default()).unwrap();
        assert!((sol.leading_value - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(sol.leading_order, 1);
        assert_eq!(sol.residue_defect, 0.0);
        let z = c(0.3, 0.4);
        assert!((sol.report.f.eval_power(z).unwrap() - z * 2f64.sqrt()).norm() < 1e-12);
    }

    #[test]
    fn even_p_two_zeros() {
        let opts = SolveOptions::default();
        let sol = canonical_divisor(4.0, &zeros(&[(c(0.3, 0.0), 1), (c(0.0, -0.4), 1)]), &opts).unwrap();
        assert!((sol.report.norm - 1.0).abs() < 1e-8);
        assert!(sol.certificate_passed());
        assert!(sol.residue_defect < 1e-10);
        assert!(sol.zero_residual < 1e-10);
    }

    #[test]
    fn origin_and_other_zero() {
        let opts = SolveOptions::default();
        let sol = canonical_divisor(4.0, &zeros(&[(c(0.0, 0.0), 1), (c(0.5, 0.2), 2)]), &opts).unwrap();
        assert!((sol.report.norm - 1.0).abs() < 1e-8);
        assert!(sol.leading_value > 0.0);
    }

    #[test]
    fn residue_negative_control() {
        let a = c(0.5, 0.0);
        let r = RationalRep::new(
            Poly::constant(c(1.0, 0.0)),
            vec![PoleTerm::new(a, 1, c(2.0, 0.0)).unwrap(), PoleTerm::new(a, 2, c(1.0, 0.0)).unwrap()],
        );
        let v = contour_residues(&r).unwrap();
        assert!((v - 4.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn zero_set_json_forms() {
        let one: ZeroSet = serde_json::from_str("[[0.5, 0], 1]").unwrap();
        assert_eq!(one.entries(), &[(c(0.5, 0.0), 1)]);
        let many: ZeroSet = serde_json::from_str("[[[0.3, 0], 1], {\"point\": [0, -0.4], \"multiplicity\": 2}]").unwrap();
        assert_eq!(many.entries().len(), 2);
        let bare: ZeroSet = serde_json::from_str("[[0.3, 0], [0, -0.4], [[0.1, 0.1], 2]]").unwrap();
        assert_eq!(bare.entries(), &[(c(0.3, 0.0), 1), (c(0.0, -0.4), 1), (c(0.1, 0.1), 2)]);
        let single: ZeroSet = serde_json::from_str("[0.2, 0.3]").unwrap();
        assert_eq!(single.entries(), &[(c(0.2, 0.3), 1)]);
        assert!(serde_json::from_str::<ZeroSet>("[[1.5, 0], 1]").is_err());
        assert!(serde_json::from_str::<ZeroSet>("[]").is_err());
    }

    #[test]
    fn odd_p_rejected() {
        assert!(canonical_divisor(3.0, &zeros(&[(c(0.5, 0.0), 1)]), &SolveOptions::default()).is_err());
    }
}
