//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image dimensions {actual_w}x{actual_h} do not match expected {expected_w}x{expected_h}")]
    DimensionMismatch {
        expected_w: usize,
        expected_h: usize,
        actual_w: usize,
        actual_h: usize,
    },

    #[error("image peak values differ: {a} vs {b}")]
    PeakMismatch { a: f64, b: f64 },

    #[error("invalid image geometry: width={width}, height={height}, data_len={data_len}")]
    InvalidGeometry {
        width: usize,
        height: usize,
        data_len: usize,
    },

    #[error("invalid peak value {0}; peak must be finite and positive")]
    InvalidPeak(f64),

    #[error("non-finite intensity at (row {row}, col {col})")]
    NonFiniteIntensity { row: usize, col: usize },

    #[error("image {width}x{height} too small for an 11x11 SSIM window")]
    TooSmallForSsim { width: usize, height: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown method '{name}'; valid methods are {valid}")]
    UnknownMethod { name: String, valid: String },

    #[error("frame set is empty")]
    EmptyFrameSet,

    #[error(transparent)]
    Pnm(#[from] PnmError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors from the PGM/PPM codec. Parse errors carry the byte offset where
/// the problem was detected.
#[derive(Debug, Error)]
pub enum PnmError {
    #[error("unsupported magic number '{0}'; expected P2, P3, P5, or P6")]
    BadMagic(String),

    #[error("malformed header token at byte {offset}: {reason}")]
    BadHeader { offset: usize, reason: String },

    #[error("maxval {0} out of range; must be in 1..=65535")]
    BadMaxval(u64),

    #[error("invalid image size {width}x{height}")]
    BadSize { width: u64, height: u64 },

    #[error("malformed sample at byte {offset}: {reason}")]
    BadSample { offset: usize, reason: String },

    #[error("sample value {value} exceeds declared maxval {maxval}")]
    SampleRange { value: u64, maxval: u32 },

    #[error("file truncated: expected {expected} samples, found {found}")]
    Truncated { expected: u64, found: u64 },

    #[error("peak {0} too large to encode; PGM maxval is capped at 65535")]
    PeakTooLarge(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
