use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the segmentation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unreadable image {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },

    #[error("{path}: expected an 8-bit single-channel image, found {found}")]
    MultiChannel { path: PathBuf, found: String },

    #[error("{path}: zero-size image")]
    ZeroSize { path: PathBuf },

    #[error("{path}: non-binary mask value {value} (expected 0 or 255)")]
    NonBinary { path: PathBuf, value: u8 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image encoding failed for {path}: {reason}")]
    Encode { path: PathBuf, reason: String },

    #[error("manifest schema violation: {0}")]
    Schema(String),

    #[error("missing file: {0}")]
    MissingFile(PathBuf),

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("no contrast: patch has a single intensity")]
    NoContrast,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("sampler transport failure: {0}")]
    Transport(String),

    #[error("malformed sampler response: {0}")]
    MalformedResponse(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
