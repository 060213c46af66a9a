//! Crate-wide error type and exit-code mapping for the CLI.

/// Errors produced by any operation in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed or unsupported file contents (WAV, labels, manifests).
    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported channel count {channels}; only mono is accepted")]
    UnsupportedChannels { channels: u16 },

    #[error("unsupported sample encoding: format {audio_format}, {bits} bits/sample")]
    UnsupportedEncoding { audio_format: u16, bits: u16 },

    /// Signal is unusable for the requested operation (empty, constant, silent).
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("non-finite sample values: {0}")]
    NonFinite(String),

    #[error("length mismatch: {left} vs {right} samples")]
    LengthMismatch { left: usize, right: usize },

    #[error("sample rate mismatch: {left} Hz vs {right} Hz")]
    RateMismatch { left: u32, right: u32 },

    /// Tensor or layer shapes do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degenerate statistics: {0}")]
    DegenerateStatistics(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// Problems with input data sets (manifests, label files, directories).
    #[error("data error: {0}")]
    Data(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit code contract: 0 success, 1 usage, 2 data, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Config(_) => 1,
            Error::Io(_)
            | Error::Format(_)
            | Error::UnsupportedChannels { .. }
            | Error::UnsupportedEncoding { .. }
            | Error::LengthMismatch { .. }
            | Error::RateMismatch { .. }
            | Error::Checkpoint(_)
            | Error::Data(_) => 2,
            Error::DegenerateSignal(_)
            | Error::NonFinite(_)
            | Error::ShapeMismatch(_)
            | Error::DegenerateStatistics(_)
            | Error::Numeric(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
