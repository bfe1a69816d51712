use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tensor index {0} out of range 1..=4")]
    TensorIndex(usize),

    #[error("flat index {0} out of range 5..=20")]
    FlatIndex(usize),

    #[error("parameter matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state at step {step} (last good tau = {last_good_tau})")]
    NonFinite { step: usize, last_good_tau: f64 },

    #[error("sample set is degenerate: {0}")]
    DegenerateSamples(String),

    #[error("event {0:?} lies outside the field patch")]
    OutsidePatch([f64; 4]),

    #[error("field evaluation failed: {0}")]
    FieldEvaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
