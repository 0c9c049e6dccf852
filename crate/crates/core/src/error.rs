use thiserror::Error;

use crate::mub::BasisLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0}; only 4 and 5 are supported")]
    UnsupportedDimension(usize),

    #[error("matrix is not unitary (max |M†M - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("basis {label} does not exist in dimension {dim}")]
    InvalidLabel { label: BasisLabel, dim: usize },

    #[error("unknown basis letter {0:?}")]
    UnknownLabel(char),

    #[error("bases must be distinct, {0} appears twice")]
    RepeatedBasis(BasisLabel),

    #[error("expected between {min} and {max} bases, got {got}")]
    BasisCount { min: usize, max: usize, got: usize },

    #[error("incompatible histograms: {0}")]
    IncompatibleHistograms(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("count record has zero total")]
    ZeroCounts,
}
