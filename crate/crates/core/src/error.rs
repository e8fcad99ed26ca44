//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: PNG decoding failed: {source}")]
    PngDecode {
        path: PathBuf,
        #[source]
        source: png::DecodingError,
    },

    #[error("{path}: PNG encoding failed: {source}")]
    PngEncode {
        path: PathBuf,
        #[source]
        source: png::EncodingError,
    },

    /// The file is a valid PNG but not 8-bit grayscale or 8-bit RGB.
    #[error("{path}: unsupported PNG format: {detail}")]
    UnsupportedPng { path: PathBuf, detail: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("{size}x{size} kernel does not fit {height}x{width} image")]
    KernelTooLarge {
        size: usize,
        height: usize,
        width: usize,
    },

    #[error("pool holds {len} entries, {requested} required")]
    PoolUnderfull { len: usize, requested: usize },
}
