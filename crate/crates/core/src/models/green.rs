//! Green's function elements `G_ab(z) = a† (z I - H)^{-1} b` from one shifted solve.

use num_complex::Complex64;

use super::ModelError;
use crate::linalg::LinearOperator;
use crate::solvers::{self, CoefficientLog, Method, ProjectionSpec, SolverOptions, StepStatus};

/// Values of one element on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub frequencies: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub method: Method,
    /// `(iteration, max residual, seed index)` per update.
    pub history: Vec<(usize, f64, usize)>,
    pub log: Option<CoefficientLog>,
}

impl SpectrumResult {
    /// `-Im G / π` per frequency.
    pub fn spectral_weight(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|g| -g.im / std::f64::consts::PI)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GreenConfig {
    /// `None` selects from the operator's structure.
    pub method: Option<Method>,
    pub options: SolverOptions,
}

/// `G_aa(z_i) = a† (z_i I - H)^{-1} a` on the whole grid with one solver run.
pub fn green_diagonal<O: LinearOperator + ?Sized>(
    op: &O,
    a: &[Complex64],
    grid: &[Complex64],
    config: &GreenConfig,
) -> Result<SpectrumResult, ModelError> {
    if a.len() != op.dim() {
        return Err(ModelError::Dimension {
            expected: op.dim(),
            found: a.len(),
        });
    }
    let method = config
        .method
        .unwrap_or_else(|| Method::for_operator(op.symmetry(), op.is_real()));
    let out = solvers::solve(method, op, grid, a, ProjectionSpec::bra(a), config.options)?;
    Ok(SpectrumResult {
        frequencies: grid.to_vec(),
        values: out.solutions.iter().map(|y| y[0]).collect(),
        residuals: out.residuals,
        iterations: out.iterations,
        converged: out.status == StepStatus::Converged,
        method,
        history: out.history,
        log: out.log,
    })
}

/// Off-diagonal element from four diagonal ones evaluated at the same `z`,
/// with `c = a + b` and `d = a + i b`.
///
/// Returns `[(G_cc - G_aa - G_bb) + i (G_dd - G_aa - G_bb)] / 2`, which is
/// `b† G(z) a`. For real symmetric `H` and real `a`, `b` this equals `a† G(z) b`.
pub fn green_offdiagonal(g_aa: Complex64, g_bb: Complex64, g_cc: Complex64, g_dd: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    ((g_cc - g_aa - g_bb) + i * (g_dd - g_aa - g_bb)) / 2.0
}

/// `b† G(z_i) a` on a grid, by four diagonal runs.
pub fn green_element<O: LinearOperator + ?Sized>(
    op: &O,
    a: &[Complex64],
    b: &[Complex64],
    grid: &[Complex64],
    config: &GreenConfig,
) -> Result<Vec<Complex64>, ModelError> {
    if a.len() != b.len() {
        return Err(ModelError::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    let i = Complex64::new(0.0, 1.0);
    let c: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let d: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
    let run = |v: &[Complex64]| -> Result<Vec<Complex64>, ModelError> {
        if v.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            Ok(vec![Complex64::new(0.0, 0.0); grid.len()])
        } else {
            Ok(green_diagonal(op, v, grid, config)?.values)
        }
    };
    let (gaa, gbb, gcc, gdd) = (run(a)?, run(b)?, run(&c)?, run(&d)?);
    Ok((0..grid.len())
        .map(|k| green_offdiagonal(gaa[k], gbb[k], gcc[k], gdd[k]))
        .collect())
}
