use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inputs are individually valid but used inconsistently.
    #[error("usage error: {0}")]
    Usage(String),
    /// The input carries no information for the requested statistic.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// The formula diverges at the requested point.
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
