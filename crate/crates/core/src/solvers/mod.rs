//! Shifted CG, COCG and BiCG behind one reverse-communication state machine.
//!
//! All four methods share the three-term residual recurrence and differ only
//! in the inner product used for `ρ` and `α`:
//!
//! | method       | matrix `zI - H`            | inner product |
//! |--------------|----------------------------|---------------|
//! | `CgReal`     | real symmetric, real `z`   | `r·r`         |
//! | `CgComplex`  | Hermitian, real `z`        | `r†r`         |
//! | `Cocg`       | complex symmetric          | `rᵀr`         |
//! | `Bicg`       | general                    | `r̃†r`         |
//!
//! The caller supplies every matrix-vector product, see [`SolverState`], or
//! uses [`solve`] with a [`LinearOperator`](crate::linalg::LinearOperator).

mod driver;
mod log;
mod shifts;
mod state;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use driver::{drive, solve, SolveOutcome};
pub use log::{recalc, CoefficientLog, IterationRecord, Recalculated, SeedSwitch};
pub use shifts::ShiftSet;
pub use state::{Finalized, SeedCheckpoint, SolverState, StepOutcome, StepStatus};

use crate::linalg::vector::{dot, norm2};
use crate::linalg::{DenseVector, Symmetry};

/// Magnitudes below this count as exact zero in denominators.
pub const TINY: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    CgReal,
    CgComplex,
    Cocg,
    Bicg,
}

impl Method {
    /// Product vectors the caller supplies per update.
    pub fn products_per_iteration(self) -> usize {
        match self {
            Method::Bicg => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::CgReal => "cg_r",
            Method::CgComplex => "cg_c",
            Method::Cocg => "cocg",
            Method::Bicg => "bicg",
        }
    }

    /// Method for a Green's function of an operator with the given structure
    /// at complex frequencies.
    ///
    /// Real symmetric `H` gives a complex symmetric `zI - H` but BiCG is used
    /// there as well; a complex Hermitian `H` makes `zI - H` neither Hermitian
    /// nor complex symmetric, so only BiCG is valid. COCG is chosen for
    /// complex symmetric operators.
    pub fn for_operator(symmetry: Symmetry, is_real: bool) -> Method {
        match (symmetry, is_real) {
            (Symmetry::Symmetric, false) => Method::Cocg,
            _ => Method::Bicg,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cg_r" | "cgr" => Ok(Method::CgReal),
            "cg_c" | "cgc" => Ok(Method::CgComplex),
            "cocg" => Ok(Method::Cocg),
            "bicg" => Ok(Method::Bicg),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakdownKind {
    /// `ρ_n` vanished.
    Rho,
    /// The denominator of `α_n` vanished.
    AlphaDenominator,
    /// `π_{n+1}` of a shift vanished: the shift sits on a breakdown point.
    Collinearity { shift: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("breakdown at iteration {iteration}: {kind:?}")]
    Breakdown { iteration: usize, kind: BreakdownKind },
    #[error("at least one shift is required")]
    NoShifts,
    #[error("right-hand side is zero")]
    ZeroRhs,
    #[error("threshold must be positive and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("iteration budget must be at least 1")]
    InvalidBudget,
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("{method} cannot be used: {reason}")]
    Incompatible { method: Method, reason: &'static str },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("projection has no rows")]
    EmptyProjection,
    #[error("BiCG update needs the shadow product H† r̃")]
    MissingShadowProduct,
    #[error("coefficient log is empty")]
    EmptyLog,
    #[error("corrupt coefficient log: {0}")]
    CorruptLog(String),
}

/// The map `P` applied to residuals; only `y = P x` is accumulated.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionSpec {
    /// `P = I`: full solutions.
    Full,
    /// Explicit rows `p_i`; `(P r)_i = Σ_j p_ij r_j` (no conjugation).
    Rows(Vec<DenseVector>),
    /// One row.
    Single(DenseVector),
}

impl ProjectionSpec {
    /// `P = a†`, so that `P x = a† x`.
    pub fn bra(a: &[Complex64]) -> Self {
        ProjectionSpec::Single(a.iter().map(|z| z.conj()).collect())
    }

    /// `P` made of the bras `a_i†`.
    pub fn bras<'a>(rows: impl IntoIterator<Item = &'a [Complex64]>) -> Self {
        ProjectionSpec::Rows(
            rows.into_iter()
                .map(|a| a.iter().map(|z| z.conj()).collect())
                .collect(),
        )
    }

    pub fn m_left(&self, dim: usize) -> usize {
        match self {
            ProjectionSpec::Full => dim,
            ProjectionSpec::Rows(rows) => rows.len(),
            ProjectionSpec::Single(_) => 1,
        }
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<(), SolverError> {
        let rows: &[DenseVector] = match self {
            ProjectionSpec::Full => return Ok(()),
            ProjectionSpec::Rows(rows) => rows,
            ProjectionSpec::Single(row) => std::slice::from_ref(row),
        };
        if rows.is_empty() {
            return Err(SolverError::EmptyProjection);
        }
        for row in rows {
            if row.len() != dim {
                return Err(SolverError::Dimension {
                    expected: dim,
                    found: row.len(),
                });
            }
            if row.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(SolverError::NonFinite("projection row"));
            }
        }
        Ok(())
    }

    /// Writes `P r` into `out`.
    pub(crate) fn apply_into(&self, r: &[Complex64], out: &mut [Complex64]) {
        match self {
            ProjectionSpec::Full => out.copy_from_slice(r),
            ProjectionSpec::Single(row) => out[0] = project_row(row, r),
            ProjectionSpec::Rows(rows) => {
                for (o, row) in out.iter_mut().zip(rows) {
                    *o = project_row(row, r);
                }
            }
        }
    }
}

fn project_row(row: &[Complex64], r: &[Complex64]) -> Complex64 {
    row.iter().zip(r).map(|(p, x)| p * x).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Convergence when every `|r^σ|` is below this.
    pub threshold: f64,
    /// Interpret `threshold` relative to `|b|`.
    pub relative: bool,
    /// Keep a [`CoefficientLog`] for restart and recalc.
    pub log: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            threshold: 1e-6,
            relative: false,
            log: false,
        }
    }
}

impl SolverOptions {
    /// Threshold `10^(-convfactor)`.
    pub fn with_convfactor(mut self, convfactor: i32) -> Self {
        self.threshold = 10f64.powi(-convfactor);
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_log(mut self, log: bool) -> Self {
        self.log = log;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }
}

/// `|b - (z I - H) x| / |b|` for an explicit solution; test and example helper.
pub fn relative_residual<O: crate::linalg::LinearOperator + ?Sized>(
    op: &O,
    z: Complex64,
    b: &[Complex64],
    x: &[Complex64],
) -> f64 {
    let mut hx = vec![Complex64::new(0.0, 0.0); x.len()];
    op.apply(x, &mut hx);
    let r: Vec<Complex64> = b
        .iter()
        .zip(x)
        .zip(&hx)
        .map(|((bi, xi), hxi)| bi - (z * xi - hxi))
        .collect();
    norm2(&r) / norm2(b)
}

/// `|<a, b>| / (|a| |b|)`.
pub fn normalized_overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    dot(a, b).norm() / (norm2(a) * norm2(b))
}
