use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("core partition {0} is not a {1}-core")]
    NotACore(String, usize),

    #[error("series constant term {0} is not a unit")]
    NotAUnit(String),

    #[error("orthogonality sum at q^{n} is not an exact multiple of {b}: {detail}")]
    Divisibility { n: usize, b: usize, detail: String },

    #[error("sequence too short: need index {needed}, have {len} values")]
    SequenceTooShort { needed: usize, len: usize },

    #[error("checksum mismatch in cache file {}", .0.display())]
    ChecksumMismatch(PathBuf),

    #[error("malformed cache file {}: {reason}", path.display())]
    MalformedCache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
