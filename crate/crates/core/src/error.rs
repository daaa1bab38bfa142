use thiserror::Error;

/// Failures surfaced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The inputs are well-formed but no rule is implemented for them.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Random point sampling could not satisfy its constraints.
    #[error("sampling error: {0}")]
    Sampling(String),
    /// A system spec (JSON or shorthand) could not be parsed.
    #[error("invalid system spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
