use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("no tiling possible: {0}")]
    NoTilingPossible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("corrupt table cache: {0}")]
    CorruptCache(String),
    #[error("enumeration cap exceeded: board has {area} cells, cap is {cap} (pass an override to proceed)")]
    CapExceeded { area: usize, cap: usize },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Document(String),
}
