//! Per-shift bookkeeping shared by live iteration, restart and recalc.
//!
//! Everything here is driven by an [`IterationRecord`]: the live solver builds
//! one per update and the replay paths read them back from a log, so both run
//! exactly the same floating-point operations.

use num_complex::Complex64;

use super::log::IterationRecord;
use super::{BreakdownKind, SolverError, TINY};

/// Shifts whose collinearity factor grows past this are frozen: their
/// residual is below `|r| * 1e-150`.
const PI_LIMIT: f64 = 1e150;

/// The shifted family `z_k`, with collinearity factors, projected solutions
/// and projected search directions for every member.
#[derive(Debug, Clone)]
pub struct ShiftSet {
    z: Vec<Complex64>,
    /// `π_n` for each shift.
    pi: Vec<Complex64>,
    /// `π_{n-1}` for each shift.
    pi_prev: Vec<Complex64>,
    frozen: Vec<bool>,
    frozen_residual: Vec<f64>,
    m_left: usize,
    /// Column-major `m_left × n_eq`.
    y: Vec<Complex64>,
    /// Last projected direction `u_{n-1}`; `u_n` is formed during the next advance.
    u: Vec<Complex64>,
}

impl ShiftSet {
    pub(crate) fn new(z: &[Complex64], m_left: usize) -> Self {
        let n = z.len();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            z: z.to_vec(),
            pi: vec![one; n],
            pi_prev: vec![one; n],
            frozen: vec![false; n],
            frozen_residual: vec![0.0; n],
            m_left,
            y: vec![zero; m_left * n],
            u: vec![zero; m_left * n],
        }
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.z
    }

    pub fn collinearity(&self) -> &[Complex64] {
        &self.pi
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen[k]
    }

    pub fn frozen_count(&self) -> usize {
        self.frozen.iter().filter(|&&f| f).count()
    }

    pub fn m_left(&self) -> usize {
        self.m_left
    }

    pub fn solution(&self, k: usize) -> &[Complex64] {
        &self.y[k * self.m_left..(k + 1) * self.m_left]
    }

    pub(crate) fn into_solutions(self) -> Vec<Vec<Complex64>> {
        self.y.chunks(self.m_left.max(1)).map(<[Complex64]>::to_vec).collect()
    }

    /// One step of the shifted recurrences for every unfrozen shift, given the
    /// seed coefficients of iteration `n` and the projected seed residual `P r_n`.
    pub(crate) fn advance(
        &mut self,
        rec: &IterationRecord,
        projected_residual: &[Complex64],
        iteration: usize,
    ) -> Result<(), SolverError> {
        debug_assert_eq!(projected_residual.len(), self.m_left);
        let one = Complex64::new(1.0, 0.0);
        let c = rec.three_term_ratio();
        let m = self.m_left;
        for k in 0..self.z.len() {
            if self.frozen[k] {
                continue;
            }
            let sigma = self.z[k] - rec.z_seed;
            let pi = self.pi[k];
            let pi_prev = self.pi_prev[k];
            let pi_next = (one + c + rec.alpha * sigma) * pi - c * pi_prev;
            if pi_next.norm() < TINY {
                return Err(SolverError::Breakdown {
                    iteration,
                    kind: BreakdownKind::Collinearity { shift: k },
                });
            }
            let ratio = pi_prev / pi;
            let beta_shift = ratio * ratio * rec.beta_prev;
            let alpha_shift = pi / pi_next * rec.alpha;
            let u = &mut self.u[k * m..(k + 1) * m];
            let y = &mut self.y[k * m..(k + 1) * m];
            for ((ui, yi), pri) in u.iter_mut().zip(y.iter_mut()).zip(projected_residual) {
                *ui = pri / pi + beta_shift * *ui;
                *yi += alpha_shift * *ui;
            }
            self.pi_prev[k] = pi;
            self.pi[k] = pi_next;
        }
        Ok(())
    }

    /// The unfrozen shift with the smallest `|π|`, lowest index on ties.
    pub(crate) fn slowest(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (k, pi) in self.pi.iter().enumerate() {
            if self.frozen[k] {
                continue;
            }
            let a = pi.norm();
            if best.is_none_or(|(_, b)| a < b) {
                best = Some((k, a));
            }
        }
        best.map(|(k, _)| k)
    }

    /// Re-expresses every unfrozen collinearity pair relative to a new seed
    /// whose factors were `(π_n, π_{n-1}) = (pi_new, pi_old)`.
    pub(crate) fn rescale(&mut self, pi_new: Complex64, pi_old: Complex64) {
        for k in 0..self.z.len() {
            if self.frozen[k] {
                continue;
            }
            self.pi[k] /= pi_new;
            self.pi_prev[k] /= pi_old;
        }
    }

    /// Freezes shifts whose residual `|r| / |π|` fell below `threshold`.
    pub(crate) fn freeze_converged(&mut self, seed_norm: f64, threshold: f64) {
        for k in 0..self.z.len() {
            if self.frozen[k] {
                continue;
            }
            let pi = self.pi[k].norm();
            let res = seed_norm / pi;
            if res < threshold || pi > PI_LIMIT {
                self.frozen[k] = true;
                self.frozen_residual[k] = res;
            }
        }
    }

    pub(crate) fn residual(&self, k: usize, seed_norm: f64) -> f64 {
        if self.frozen[k] {
            self.frozen_residual[k]
        } else {
            seed_norm / self.pi[k].norm()
        }
    }

    pub(crate) fn residuals(&self, seed_norm: f64) -> Vec<f64> {
        (0..self.z.len()).map(|k| self.residual(k, seed_norm)).collect()
    }

    pub(crate) fn pi_pair(&self, k: usize) -> (Complex64, Complex64) {
        (self.pi[k], self.pi_prev[k])
    }

    pub(crate) fn all_frozen(&self) -> bool {
        self.frozen.iter().all(|&f| f)
    }
}
