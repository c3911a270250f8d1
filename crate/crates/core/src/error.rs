use std::path::PathBuf;

use crate::imgcore::ColorSpace;

/// Errors produced by every fallible operation in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported color conversion from {from} to {to}")]
    Conversion { from: ColorSpace, to: ColorSpace },

    #[error("expected a {expected} image, got {found}")]
    ImageType {
        expected: &'static str,
        found: ColorSpace,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("invalid image buffer: {0}")]
    InvalidBuffer(String),

    #[error("no such file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    #[error("png codec error: {0}")]
    Png(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("no features found at stage `{stage}`")]
    NoFeature { stage: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
