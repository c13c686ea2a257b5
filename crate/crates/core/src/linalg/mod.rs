//! Vectors, compressed sparse matrices, SpMV and Matrix Market I/O.

pub mod market;
pub mod sparse;
pub mod vector;

use thiserror::Error;

pub use market::{MarketError, MarketObject};
pub use sparse::{CountingOperator, Duplicates, LinearOperator, SparseMatrix, Symmetry, ValueKind};
pub use vector::{axpy, dot, dot_unconjugated, norm2, DenseVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix dimension must be positive")]
    EmptyDimension,
    #[error("entry ({row}, {col}) outside a {dim}x{dim} matrix")]
    IndexOutOfBounds { row: usize, col: usize, dim: usize },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("Hermitian matrix has a complex diagonal entry at {index}")]
    ComplexHermitianDiagonal { index: usize },
    #[error("matrix is not {0:?}")]
    SymmetryViolated(Symmetry),
}
