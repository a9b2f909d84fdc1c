use alloc::string::String;

use crate::linalg::LinalgError;
use crate::quiver::QuiverError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("malformed data in degree {degree}: {detail}")]
    Shape { degree: i32, detail: String },
    #[error("entry ({row},{col}) of the map in degree {degree} is not in e_w A e_v for its row and column vertices")]
    EntryOutsideHomSpace { degree: i32, row: usize, col: usize },
    #[error("d∘d ≠ 0: entry ({row},{col}) of d^{} ∘ d^{degree} is nonzero", degree + 1)]
    NotAComplex { degree: i32, row: usize, col: usize },
    #[error("not a chain map: entry ({row},{col}) fails to commute in degree {degree}")]
    NotAChainMap { degree: i32, row: usize, col: usize },
    #[error("source or target mismatch when composing maps")]
    ComplexMismatch,
    #[error("{0} requires the rational field")]
    UnsupportedField(&'static str),
    #[error("vertex `{0}` is not in the required vertex subset")]
    VertexOutsideSubset(String),
    #[error("idempotent subset must be a nonempty proper subset of the vertices")]
    InvalidSubset,
    #[error("eA(1-e) ≠ 0: arrow `{0}` leaves the idempotent subset")]
    ArrowLeavesSubset(String),
    #[error("shortcut gluing does not apply: {0}")]
    ShortcutInapplicable(String),
    #[error("input set {0} is not non-positive")]
    NotNonPositive(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
