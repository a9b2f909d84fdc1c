//! Exact dense linear algebra over ℚ and prime fields.

mod matrix;
mod scalar;

pub use matrix::{Echelon, Matrix, RowSpace};
pub use scalar::{Field, Rational, Scalar};

/// Failures of matrix operations on malformed input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("entries from different fields: expected {expected}, found {found}")]
    MixedFields { expected: Field, found: Field },
    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("rows of unequal length")]
    Ragged,
    #[error("dimension mismatch: {left:?} against {right:?}")]
    Dimension {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square")]
    NotSquare,
}
