//! Error type shared across the toolkit.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by any toolkit operation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("image decode error on {path}: {msg}")]
    ImageDecode { path: PathBuf, msg: String },

    #[error("corrupt file {path}: {msg}")]
    Corrupt { path: PathBuf, msg: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    /// Coarse category used by callers that map errors to process exit codes.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Io { .. } | Error::ImageDecode { .. } | Error::Corrupt { .. } => {
                ErrorCategory::Io
            }
            Error::Parse { .. } => ErrorCategory::Io,
            Error::ShapeMismatch(_) | Error::InvalidConfig(_) => ErrorCategory::Shape,
            Error::Domain(_) => ErrorCategory::Domain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Missing, unreadable, or corrupt files.
    Io,
    /// Valid files whose content is unusable (empty foreground, too sparse, ...).
    Domain,
    /// Dimension or configuration mismatches.
    Shape,
}

pub type Result<T> = std::result::Result<T, Error>;
