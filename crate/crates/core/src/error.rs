use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("table limit must be at least 1")]
    ZeroLimit,
    #[error("argument {m} outside the domain 1 <= |m| <= {limit}")]
    OutOfDomain { m: i64, limit: u64 },
    #[error("range needs values up to {needed} but the table stops at {limit}")]
    ExceedsLimit { needed: u64, limit: u64 },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no decay majorant available: {0}")]
    Unsupported(String),
    #[error("search bound {bound} exhausted without certifying the remaining terms vanish")]
    SearchExhausted { bound: u64 },
    #[error("unknown arithmetic function `{0}`")]
    UnknownFunction(String),
    #[error("cache file {path}: {reason}")]
    Cache { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
