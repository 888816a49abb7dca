use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operands disagree on ambient dimension, truncation degree or shape.
    #[error("structural mismatch: {0}")]
    Structure(String),

    /// A linear part (or matrix) is numerically singular.
    #[error("singular linear part: |det| = {det:e} <= {tol:e}")]
    Singular { det: f64, tol: f64 },

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter constraint was violated. `constraint` names the inequality.
    #[error("validation failed: {constraint} ({detail})")]
    Validation { constraint: String, detail: String },

    /// A combinatorial budget was exhausted.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
