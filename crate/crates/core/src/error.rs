use std::io;

use thiserror::Error;

/// Errors raised by the optimizer, its problem definitions and its IO layer.
#[derive(Debug, Error)]
pub enum DdwError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DdwError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(DdwError::InvalidInput(msg.into()))
}
