//! Exact linear algebra over the Gaussian rationals Q(i).
//!
//! Everything here is exact: scalars are pairs of arbitrary-precision
//! rationals and subspaces are kept in reduced row echelon form, so equal
//! spans compare equal.

mod filtration;
mod matrix;
mod scalar;
mod subspace;

pub use filtration::{Direction, Filtration};
pub use matrix::{rref, to_i64_rows, GVector, Matrix};
pub use scalar::{format_ratio, parse_ratio, GScalar};
pub use subspace::{coordinates_mod, induced_map, induced_map_on_quotient, Subspace};

pub(crate) use scalar::ratio_to_f64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("subspaces are not nested")]
    NotNested,
    #[error("map does not preserve the given subspace pair")]
    NotPreserved,
    #[error("vector is not in the expected span")]
    NotInSpan,
    #[error("matrix is singular")]
    Singular,
}
