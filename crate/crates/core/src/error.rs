use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by qclab.
#[derive(Debug, Error)]
pub enum Error {
    /// An invalid configuration value or an unknown identifier.
    #[error("configuration error: {0}")]
    Config(String),

    /// Two fields defined on different grids were combined.
    #[error("grid mismatch: left n={left}, right n={right}")]
    Dimension { left: usize, right: usize },

    /// A field snapshot could not be parsed.
    #[error("malformed snapshot {path:?} at line {line}: {reason}")]
    Snapshot {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("i/o error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
