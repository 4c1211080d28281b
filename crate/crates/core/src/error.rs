use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside the admissible range of an operation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid block design: {0}")]
    InvalidDesign(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("field error: {0}")]
    Field(String),

    /// Not enough symbols to decode.
    #[error("insufficient symbols: {0}")]
    Insufficient(String),

    /// Supplied symbols do not agree with any single codeword.
    #[error("inconsistent symbols: {0}")]
    Inconsistent(String),

    /// Something that the construction guarantees did not hold.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn design(msg: impl Into<String>) -> Self {
        Error::InvalidDesign(msg.into())
    }

    /// True for errors that indicate a broken internal guarantee rather than
    /// bad user input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
