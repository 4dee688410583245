use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("index {index} out of bounds for dimension {dim}")]
    IndexOutOfBounds { index: usize, dim: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("truncation N_max = {needed} would exceed the cap of {cap}")]
    TruncationCap { needed: usize, cap: usize },

    #[error("state under-truncated: normalization deficit {deficit:.3e}")]
    UnderTruncated { deficit: f64 },

    #[error("input state not normalized: deficit {deficit:.3e}")]
    NotNormalized { deficit: f64 },

    #[error("invalid Gram data: {0}")]
    InvalidGram(String),

    #[error("revival time undefined for the vacuum state")]
    VacuumRevival,

    #[error("config line {line}: key `{key}`: {msg}")]
    Config { line: usize, key: String, msg: String },

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
