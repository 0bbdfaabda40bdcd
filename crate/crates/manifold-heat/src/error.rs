use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the valid domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Operation not defined for this manifold variant or parameter choice.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Evaluation at a point where a formula degenerates.
    #[error("singularity: {0}")]
    Singularity(String),
    /// Graph construction produced an invalid graph.
    #[error("construction error: {0}")]
    Construction(String),
    /// Matrix or embedding dimensions do not agree.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// Spectral weights fell outside their admissible range.
    #[error("spectral range error: {0}")]
    SpectralRange(String),
    /// A term or iteration budget was exhausted before the target was met.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A numeric procedure failed to converge.
    #[error("numeric error: {what} (residual {residual:.3e})")]
    Numeric { what: String, residual: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
