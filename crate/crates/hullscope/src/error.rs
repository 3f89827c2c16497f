use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum HullscopeError {
    /// Shapes of inputs do not line up (query vs. point-set dimension, empty sets, ...).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Numerically invalid input: NaN or infinite coordinates, non-positive
    /// counts, malformed parameter combinations.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A sampler / distribution spec string could not be parsed or is inconsistent.
    #[error("bad spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    /// A request lies outside the mathematical domain of a formula
    /// (e.g. probabilities need N >= 1, d >= 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature failed to converge to the requested accuracy.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// A binary dataset file is malformed (bad magic, truncated payload, ...).
    #[error("format error in {path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HullscopeError>;

impl HullscopeError {
    pub fn dim(msg: impl Into<String>) -> Self {
        HullscopeError::Dimension(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        HullscopeError::InvalidInput(msg.into())
    }

    pub fn spec(spec: impl Into<String>, reason: impl Into<String>) -> Self {
        HullscopeError::Spec {
            spec: spec.into(),
            reason: reason.into(),
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        HullscopeError::Domain(msg.into())
    }

    pub fn format(path: impl Into<String>, reason: impl Into<String>) -> Self {
        HullscopeError::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
