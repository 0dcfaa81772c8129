use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} out of range (expected 2..=64)")]
    DimensionOutOfRange(usize),
    #[error("invalid party count {0}: {1}")]
    InvalidPartyCount(usize, &'static str),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("size overflow: {requested} exceeds the limit of {limit}")]
    SizeOverflow { requested: u128, limit: u128 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("map is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("operator is not square")]
    NotSquare,
    #[error("malformed settings: {0}")]
    MalformedSettings(&'static str),
    #[error("negative probability {0:e} beyond clamp threshold")]
    NegativeProbability(f64),
    #[error("distribution not normalized: total mass {0}")]
    NotNormalized(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
