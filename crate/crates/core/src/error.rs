use thiserror::Error;

/// Errors raised by the counting kernels and calculators.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),

    /// A precomputed size estimate exceeded a configured cap.
    #[error("resource error: {what} needs {needed} but the cap is {cap}")]
    Resource {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
