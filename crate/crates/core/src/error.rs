use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("png decode error: {0}")]
    PngDecode(#[from] png::DecodingError),

    #[error("png encode error: {0}")]
    PngEncode(#[from] png::EncodingError),

    #[error("malformed pgm: {0}")]
    MalformedPgm(String),

    #[error("unsupported image format")]
    UnsupportedFormat,

    #[error("unsupported bit depth: {0}")]
    UnsupportedBitDepth(String),

    #[error("zero-dimension image")]
    ZeroDimension,

    #[error("pixel buffer length {len} does not match {width}x{height}")]
    BufferSize {
        width: usize,
        height: usize,
        len: usize,
    },

    #[error("non-finite pixel value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("invalid noise parameters: {0}")]
    InvalidNoiseParams(String),

    #[error("degenerate constant image (all pixels equal {0})")]
    DegenerateImage(u8),

    #[error("invalid impulse values: n_min={0} must be below n_max={1}")]
    InvalidImpulses(u8, u8),

    #[error("all pixels suspicious: noise density estimate is 1")]
    AllSuspicious,

    #[error("no known pixels")]
    NoKnownPixels,

    #[error("weight range violated: {0}")]
    WeightRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
