use thiserror::Error;

/// Errors raised by the simulation engine.
///
/// The variants map one-to-one onto the CLI exit codes: invalid input is a
/// configuration problem, a guard violation means the requested engine cannot
/// handle the problem size, and a numerical abort means propagation lost
/// unitarity.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("engine guard violated: {0}")]
    Guard(String),

    #[error("numerical abort: {0}")]
    NumericalAbort(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed configuration: {0}")]
    Config(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
