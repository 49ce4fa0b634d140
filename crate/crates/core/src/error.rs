use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The system violates the genericity assumptions (finitely many simple
    /// roots, none at infinity), detected through a rank or nullity mismatch.
    #[error("non-generic system: {0}")]
    Genericity(String),

    #[error("triangular matrix is numerically singular at diagonal index {index}")]
    SingularMatrix { index: usize },

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Backend { routine: &'static str, info: i32 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for the error classes that signal a non-generic input system.
    pub fn is_genericity_violation(&self) -> bool {
        matches!(self, Error::Genericity(_) | Error::SingularMatrix { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
