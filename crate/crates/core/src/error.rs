use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size mismatch: expected {expected} vertices, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("n = {n} exceeds the exhaustive search limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn check_size(expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::SizeMismatch { expected, actual })
        }
    }
}
