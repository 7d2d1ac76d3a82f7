use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("register capacity exceeded: {requested} qubits requested, limit is {limit}")]
    Capacity { requested: usize, limit: usize },

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn violation(msg: impl Into<String>) -> Self {
        Error::ProtocolViolation(msg.into())
    }

    /// Reclassifies a bad-input error found while reading a configuration.
    pub(crate) fn into_config(self) -> Self {
        match self {
            Error::Config(_) => self,
            Error::InvalidArgument(msg) => Error::Config(msg),
            other => Error::Config(other.to_string()),
        }
    }

    /// The message without the category prefix.
    pub(crate) fn detail(&self) -> String {
        match self {
            Error::InvalidArgument(m) | Error::ProtocolViolation(m) | Error::Config(m) => m.clone(),
            other => other.to_string(),
        }
    }
}
