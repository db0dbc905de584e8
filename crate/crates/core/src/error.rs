use thiserror::Error;

/// Errors raised by the library. Every failure is explicit; nothing is
/// silently clamped or retried.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid discriminant: {0}")]
    InvalidDiscriminant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("form {form} is not in the quaternionic locus for D = {d}")]
    NotInLocus { form: String, d: u64 },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("linear system is underdetermined (solution space of dimension {dimension})")]
    Underdetermined { dimension: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("data bundle: {0}")]
    Data(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
