use thiserror::Error;

/// Failure classes shared by every computation in the crate.
///
/// The CLI maps each variant to its own exit code, so new variants should
/// only be added together with a new code there.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is valid but exceeds a size or integer-width limit.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// A combination of parameters is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),
    /// A checked mathematical invariant failed at runtime.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
