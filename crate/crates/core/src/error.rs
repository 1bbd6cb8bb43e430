use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GfdError {
    #[error("size mismatch: {0}")]
    Size(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("{what} is capped at {limit}, requested {requested}")]
    Capacity {
        what: String,
        limit: u64,
        requested: u64,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("state is not compressible: {0}")]
    NotCompressible(String),

    #[error("wrong system type: {0}")]
    SystemType(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl GfdError {
    pub(crate) fn capacity(what: impl Into<String>, limit: u64, requested: u64) -> Self {
        GfdError::Capacity {
            what: what.into(),
            limit,
            requested,
        }
    }
}

pub type Result<T> = std::result::Result<T, GfdError>;
