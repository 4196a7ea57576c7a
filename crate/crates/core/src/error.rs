use thiserror::Error;

/// Errors raised by the kernel and the algorithms built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} is not normal for this weight system")]
    NotNormal { index: String },
    #[error("multi-index {index} has no neighbor below in direction {direction}")]
    NegativeIndex { index: String, direction: usize },
    #[error("moment {k} of weight {weight} is not available: {reason}")]
    InvalidMoment { weight: usize, k: i64, reason: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("recurrence coefficients disagree at {index}: {detail}")]
    InconsistentCoefficients { index: String, detail: String },
    #[error("{check} fails at {location} (residual {residual:e})")]
    IdentityViolation { check: String, location: String, residual: f64 },
    #[error("elimination system is singular at {index}")]
    DegenerateElimination { index: String },
    #[error("ratio denominator vanishes at {index}")]
    DegenerateRatio { index: String },
    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors that mean "the numbers could not be produced" rather
    /// than "an identity was checked and failed".
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix
                | Error::NotNormal { .. }
                | Error::PrecisionExhausted(_)
                | Error::InvalidMoment { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
