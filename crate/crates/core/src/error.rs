use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("backend mismatch: {0}")]
    Backend(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid chain: {0}")]
    Chain(String),
    #[error("missing entry: {0}")]
    Missing(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not stabilized: {0}")]
    Unstabilized(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
}

pub type Result<T> = core::result::Result<T, Error>;
