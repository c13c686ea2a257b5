//! Drives the reverse-communication loop with a [`LinearOperator`].

use num_complex::Complex64;

use super::{
    CoefficientLog, Method, ProjectionSpec, SeedSwitch, SolverError, SolverOptions, SolverState, StepStatus,
};
use crate::linalg::{DenseVector, LinearOperator};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// Projected solution per shift.
    pub solutions: Vec<DenseVector>,
    /// Final `|r^σ|` per shift.
    pub residuals: Vec<f64>,
    /// `(iteration, max_σ |r^σ|, seed index)` after every update.
    pub history: Vec<(usize, f64, usize)>,
    pub iterations: usize,
    pub status: StepStatus,
    pub switches: Vec<(usize, SeedSwitch)>,
    /// Largest relative jump of a reported residual across any rescaling.
    pub max_switch_discontinuity: f64,
    pub log: Option<CoefficientLog>,
}

impl SolveOutcome {
    pub fn converged(&self) -> bool {
        self.status == StepStatus::Converged
    }
}

/// Solves `(z_k I - H) x_k = b` for every `z_k` in `shifts`.
pub fn solve<O: LinearOperator + ?Sized>(
    method: Method,
    op: &O,
    shifts: &[Complex64],
    b: &[Complex64],
    projection: ProjectionSpec,
    options: SolverOptions,
) -> Result<SolveOutcome, SolverError> {
    if op.dim() != b.len() {
        return Err(SolverError::Dimension {
            expected: op.dim(),
            found: b.len(),
        });
    }
    let state = SolverState::init(method, shifts, b.to_vec(), projection, options)?;
    drive(state, op)
}

/// Runs an initialised (or restarted) state to convergence or budget exhaustion.
pub fn drive<O: LinearOperator + ?Sized>(mut state: SolverState, op: &O) -> Result<SolveOutcome, SolverError> {
    let dim = state.dim();
    if op.dim() != dim {
        return Err(SolverError::Dimension {
            expected: dim,
            found: op.dim(),
        });
    }
    let mut q = vec![Complex64::new(0.0, 0.0); dim];
    let mut qs = (state.method() == Method::Bicg).then(|| vec![Complex64::new(0.0, 0.0); dim]);
    let mut history = Vec::new();
    let mut switches = Vec::new();
    let mut max_disc: f64 = 0.0;
    let status = loop {
        op.apply(state.residual(), &mut q);
        if let (Some(qs), Some(rs)) = (qs.as_mut(), state.shadow_residual()) {
            op.apply_adjoint(rs, qs);
        }
        let out = state.update(&mut q, qs.as_deref_mut())?;
        history.push((out.iteration, out.max_residual, out.seed_index));
        if let Some(sw) = out.switch {
            switches.push((out.iteration, sw));
        }
        max_disc = max_disc.max(out.switch_discontinuity);
        if out.status != StepStatus::Iterating {
            break out.status;
        }
    };
    let fin = state.finalize();
    Ok(SolveOutcome {
        solutions: fin.solutions,
        residuals: fin.residuals,
        history,
        iterations: fin.iterations,
        status,
        switches,
        max_switch_discontinuity: max_disc,
        log: fin.log,
    })
}
