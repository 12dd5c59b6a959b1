use thiserror::Error;

/// Errors raised by graph construction, solvers and certificate preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("n*d must be even (n={n}, d={d})")]
    Parity { n: usize, d: usize },

    #[error("random regular generation failed after {attempts} attempts (n={n}, d={d})")]
    GenerationFailed { n: usize, d: usize, attempts: usize },

    #[error("eigensolver failed: {reason} (residual {residual:e})")]
    Solver { reason: String, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cycle enumeration exceeded its budget of {budget} search steps")]
    BudgetExceeded { budget: usize },

    #[error("wave model invalid: covariance eigenvalue {eigenvalue:e} below tolerance")]
    ModelInvalid { eigenvalue: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
