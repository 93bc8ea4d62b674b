use thiserror::Error;

/// Errors raised by the geometric constructions and verification pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation (zero quaternion,
    /// point outside the ball, non-orthonormal frame, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The differential of a parametrized surface dropped rank.
    #[error("immersion failure: {0}")]
    Immersion(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
