use thiserror::Error;

/// Errors raised by table construction, estimation and closed-form evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("duplicate location label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid location label: {0}")]
    InvalidLabel(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
