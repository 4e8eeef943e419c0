use thiserror::Error;

/// Errors produced by the solvers and the function algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Analytic continuation of a fractional power ran into a zero of its base.
    #[error("branch error: continuation toward {re}+{im}i crosses a zero of the base")]
    Branch { re: f64, im: f64 },

    /// Taylor data too short for the requested projection.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The closed form does not apply to this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A stated hypothesis of a closed form is violated by the input.
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    /// An iterative solver exhausted its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A converged root violates the admissibility conditions.
    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    /// The divisor linear system does not have a one-dimensional null space.
    #[error("degenerate null space: sigma_min/sigma_max = {ratio:e} (singular values {singular_values:?})")]
    DegenerateNullSpace {
        ratio: f64,
        singular_values: Vec<f64>,
    },

    /// The numeric extremality certificate exceeded the tolerance.
    #[error("certificate failed: offending projection mass {offending:e} exceeds {tolerance:e}")]
    CertificateFailed { offending: f64, tolerance: f64 },

    /// Malformed user input (CLI envelopes, JSON payloads).
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Domain(_) | Error::InsufficientData(_) => 1,
            Error::NoConvergence(_) => 3,
            _ => 2,
        }
    }
}
