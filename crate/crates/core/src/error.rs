use thiserror::Error;

/// Errors raised by PGM decoding.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgmError {
    #[error("bad magic number {0:?}, expected P2 or P5")]
    BadMagic(String),
    #[error("maxval {0} not supported (must be 1..=255)")]
    UnsupportedMaxval(u32),
    #[error("image dimensions must be positive, got {width}x{height}")]
    NonPositiveDimensions { width: u64, height: u64 },
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("sample value {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error(
        "inverse transform is not real: max imaginary residue {imag:e} exceeds 1e-6 x max real part {real:e}"
    )]
    BrokenSymmetry { imag: f64, real: f64 },
    #[error("spectrum must be centered before {0}")]
    NotCentered(&'static str),
    #[error(
        "image {width}x{height} is too small for peak detection (need at least {min}x{min}); \
         lower the window sizes or use a larger image"
    )]
    SpectrumTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },
    #[error(
        "only {found} uncontaminated donors around bin ({u}, {v}); increase the median window"
    )]
    InsufficientDonors { u: usize, v: usize, found: usize },
    #[error("moire component frequency ({freq_u}, {freq_v}) exceeds the Nyquist limit of 0.5 cycles/pixel")]
    AboveNyquist { freq_u: f64, freq_v: f64 },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
