use thiserror::Error;

/// Errors produced by the algebra engine and the module checker.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mixed degrees: expected {expected}, found {found}")]
    MixedDegree { expected: u64, found: u64 },

    #[error("dimension mismatch: expected d = {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resource bound exceeded: {what} = {value} > {limit}")]
    ResourceBound { what: &'static str, value: u64, limit: u64 },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("annihilation hypothesis fails: Q_{t} does not vanish (surviving monomial {monomial})")]
    AnnihilationFails { t: u32, monomial: String },

    #[error("invalid module description: {0}")]
    InvalidDescription(String),

    #[error("inconsistent table: {0}")]
    InconsistentTable(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
