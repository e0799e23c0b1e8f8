use thiserror::Error;

/// Failure modes of the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// The zero-mean precondition on a field (typically R - S) failed.
    #[error("zero-mean constraint violated: mean = {mean:e} exceeds tolerance {tolerance:e}")]
    MeanViolation { mean: f64, tolerance: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("blow-up at t = {t}: norm {norm:e} exceeds threshold or is not finite")]
    BlowUp { t: f64, norm: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
