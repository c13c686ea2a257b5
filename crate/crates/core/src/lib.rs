//! Shifted Krylov subspace solvers for families of shifted linear systems
//! `(z_k I - H) x_k = b`, and their applications: dynamical Green's functions,
//! spin structure factors and a contour-integral interior eigensolver.
//!
//! The solvers in [`solvers`] use reverse communication: the caller performs
//! each matrix-vector product, so any operator representation works.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour;
pub mod linalg;
pub mod models;
pub mod shiftk;
pub mod solvers;

pub use num_complex::Complex64;
