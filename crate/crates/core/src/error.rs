use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("function is not monogenic: {0}")]
    NotMonogenic(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("non-finite value during evaluation: {0}")]
    NonFinite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
