use thiserror::Error;

/// Failure classes shared by every module.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// A mathematical check failed or a certificate could not be produced.
    #[error("mathematical failure: {0}")]
    Math(String),
    /// The answer depends on data the library does not have.
    #[error("unknown: {0}")]
    Unknown(String),
    /// A search exhausted its budget.
    #[error("budget exhausted: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn math<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Math(msg.into()))
}
