use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported wavelet: {0}")]
    UnsupportedWavelet(String),

    #[error("grid misalignment: {0}")]
    Misaligned(String),

    #[error("path too short: {0}")]
    PathTooShort(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
