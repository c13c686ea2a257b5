//! Spin-chain Hamiltonians, Green's functions, structure factors and dense
//! reference oracles.

pub mod dense;
pub mod green;
pub mod spin_chain;
pub mod structure;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::solvers::SolverError;

pub use dense::{dense_assemble, dense_eig, dense_from_operator, dense_resolvent, dense_shifted_solve, Eigen};
pub use green::{green_diagonal, green_element, green_offdiagonal, GreenConfig, SpectrumResult};
pub use spin_chain::{build_hamiltonian, szq_vector, SectorBasis, SpinChainParams};
pub use structure::{structure_factor, StructureFactor};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("sector 2Sz = {two_sz} is empty for {nsite} sites")]
    EmptySector { nsite: usize, two_sz: i32 },
    #[error("dense routines are limited to dimension {limit}, got {dim}")]
    DenseTooLarge { dim: usize, limit: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}
