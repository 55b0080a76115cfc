use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frequency {freq_hz} Hz is not below the Nyquist frequency {nyquist_hz} Hz")]
    AboveNyquist { freq_hz: f64, nyquist_hz: f64 },

    #[error("sample rate mismatch: expected {expected} Hz, got {actual} Hz")]
    RateMismatch { expected: f64, actual: f64 },

    #[error("sample rate {0} Hz is too low for the ear transfer band")]
    RateTooLow(f64),

    #[error("unstable filter design: {0}")]
    UnstableDesign(String),

    #[error("{0} is undefined for silent input")]
    SilentInput(&'static str),

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("unsupported audio: {0}")]
    UnsupportedAudio(String),

    #[error("table parse error at line {line}: {msg}")]
    Table { line: usize, msg: String },

    #[error("sone/phon samples are not increasing at {0} phon")]
    NonMonotone(f64),

    #[error("{0} channels is too few; the correlation stage needs at least 21")]
    TooFewChannels(usize),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Wav(#[from] hound::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
