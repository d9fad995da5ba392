use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Probability mass on the top retained Fock levels exceeds the tolerance.
    #[error("truncation failure at dim {dim}: tail mass {tail:e} exceeds {tol:e}")]
    Truncation { dim: usize, tail: f64, tol: f64 },

    /// Results at two cutoffs disagree by more than the tolerance.
    #[error(
        "convergence failure: {coarse} at dim {coarse_dim} vs {fine} at dim {fine_dim} \
         (delta {delta:e}, tol {tol:e})"
    )]
    Convergence {
        coarse_dim: usize,
        fine_dim: usize,
        coarse: Complex64,
        fine: Complex64,
        delta: f64,
        tol: f64,
    },

    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("outside approximation envelope: {0}")]
    OutOfEnvelope(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
