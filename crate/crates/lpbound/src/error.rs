//! Error type shared across the crate.
//!
//! The three variants map onto the three failure exit codes of the CLI:
//! a checked inequality or witness that does not hold (1), malformed or
//! out-of-contract input (2), and a resource cap that was hit before the
//! computation finished (3).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad file syntax, out-of-range parameter, or a
    /// precondition violation the caller could have checked.
    #[error("input error: {0}")]
    Input(String),

    /// A configured resource cap (region count, LP size, pivot budget,
    /// time budget) was exceeded. The computation is abandoned, never
    /// silently truncated.
    #[error("resource cap exceeded: {0}")]
    Cap(String),

    /// An exact check failed: a witness is infeasible, a claimed inequality
    /// does not hold, or an internal certificate did not validate.
    #[error("check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Check(_) => 1,
            Error::Input(_) => 2,
            Error::Cap(_) => 3,
        }
    }
}

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn cap_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Cap(msg.into()))
}

pub(crate) fn check_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Check(msg.into()))
}
