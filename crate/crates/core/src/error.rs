use thiserror::Error;

/// Errors raised by the sampling, reduction and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("unsupported beta {0}; expected 1, 2 or 4")]
    UnsupportedBeta(u32),

    #[error("matrix is not self-adjoint: |A[{row}][{col}] - conj(A[{col}][{row}])| = {defect:e}")]
    NotSelfAdjoint { row: usize, col: usize, defect: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("index {k} too large for size {size} (need {requirement})")]
    IndexTooLarge {
        k: usize,
        size: usize,
        requirement: &'static str,
    },

    #[error("negative radicand {value:e} at grid index {index}")]
    NegativeRadicand { index: usize, value: f64 },

    #[error("enumeration over {size} points exceeds the cap of {cap}")]
    EnumerationCap { size: usize, cap: usize },

    #[error("malformed pairing: {0}")]
    MalformedPairing(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("incompatible time grid: {0}")]
    IncompatibleGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
