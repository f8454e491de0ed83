//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong in exact arithmetic, series construction or
/// identity checks.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A requested root of unity does not live in the working field.
    #[error("root order {requested} does not divide the field order {field}")]
    OrderMismatch { requested: u32, field: u32 },
    /// Exact square roots are wired up only for 2, 3 and 5.
    #[error("no exact square root of {0} in the working field")]
    UnsupportedRadicand(i64),
    #[error("division by zero")]
    DivisionByZero,
    /// Adding series of different pi-grades is dimensionally inconsistent.
    #[error("pi-grade mismatch: {left} vs {right}")]
    GradeMismatch { left: i32, right: i32 },
    /// The series to invert has no leading term.
    #[error("series has no invertible leading term")]
    NonInvertibleLeading,
    #[error("jet order mismatch: {left} vs {right}")]
    JetOrderMismatch { left: usize, right: usize },
    /// A phase exp(pi i p/s) needs 2s to divide the field order.
    #[error("phase does not embed in the field: {0}")]
    Embedding(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
