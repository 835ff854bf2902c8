use std::path::PathBuf;

use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("machine index {index} out of range: the ({n},2) space has {size} machines")]
    IndexOutOfRange { index: u64, n: u32, size: u64 },

    /// A request exceeds a hard capacity limit (state count, digit count,
    /// enumeration budget).
    #[error("{0}")]
    Capacity(String),

    /// A parameter fails a precondition that is not a capacity limit.
    #[error("{0}")]
    Parameter(String),

    #[error("string {0:?} was not observed in the distribution")]
    NotObserved(String),

    #[error("cannot merge distributions: {0}")]
    IncompatibleSources(String),

    #[error("insufficient support: {pairs} aligned strings of length {k}, need at least 3")]
    InsufficientSupport { pairs: usize, k: usize },

    #[error("correlation undefined: a rank vector has zero variance")]
    UndefinedCorrelation,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {reason}", path.display())]
    MalformedFile { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::MalformedFile {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
