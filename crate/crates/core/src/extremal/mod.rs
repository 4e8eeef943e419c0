//! Closed-form solvers for minimal interpolation at the origin, the `z^N + b`
//! extremal problem and the one-zero `A^4` family. Every solution carries a
//! numeric certificate: the Bergman projection of `|F|^(p-1) sgn F` must lie
//! in the span the extremality criterion allows.

mod a4;
mod certificate;
mod interpolation;
mod znb;

pub use a4::{a4_forward, a4_function, a4_residue_equation, a4_solve_c, solve_a4_one_zero, A4Candidate, A4Solution};
pub use certificate::{certify, check_extremality, AllowedSpan, Certificate};
pub use interpolation::{solve_origin_interpolation, InterpolationProblem};
pub use znb::{solve_linear_extremal_znb, ZnbSolution};

use serde::{Deserialize, Serialize};

use crate::funcrep::PowerRep;
use crate::quadrature::DiscRule;

/// Default tolerance on offending projection coefficients.
pub const DEFAULT_CERT_TOL: f64 = 1e-6;
/// Default truncation degree of certificate projections.
pub const DEFAULT_CERT_DEGREE: usize = 32;

/// Quadrature rule and certificate settings shared by the solvers.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub rule: DiscRule,
    pub cert_tol: f64,
    /// Projections are computed through this degree; must exceed the
    /// highest allowed degree.
    pub cert_degree: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rule: DiscRule::default(),
            cert_tol: DEFAULT_CERT_TOL,
            cert_degree: DEFAULT_CERT_DEGREE,
        }
    }
}

/// A solution together with the evidence that it is extremal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionReport {
    #[serde(rename = "F")]
    pub f: PowerRep,
    pub norm: f64,
    pub certificate: Certificate,
    pub warnings: Vec<String>,
}
