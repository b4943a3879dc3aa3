use thiserror::Error;

/// Errors raised while reading or validating a cached pp table.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("unsupported table format version {0}")]
    UnsupportedVersion(u32),
    #[error("sigma2 hash mismatch: file has {found}, expected {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("recurrence spot-check failed at index {0}")]
    RecurrenceMismatch(usize),
    #[error("malformed value on line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("estimated memory {needed} bytes exceeds the cap of {cap} bytes")]
    ResourceLimit { needed: u64, cap: u64 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("sequence too short: need {need} values, have {have}")]
    InsufficientSequence { need: usize, have: usize },
    #[error("ball arithmetic could not decide: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
