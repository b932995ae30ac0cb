use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error("not a lower set: {0}")]
    NotLowerSet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("group closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
