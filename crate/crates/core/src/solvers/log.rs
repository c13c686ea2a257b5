//! Coefficient log and zero-SpMV replay.
//!
//! A log keeps, for every iteration, the seed coefficients exactly as the
//! shifted recurrences consumed them, the projected seed residual `P r_n`,
//! the seed residual norm used for convergence, and the rescaling applied by
//! seed switching. Feeding the records back through [`ShiftSet`] reproduces
//! the projected solutions at any set of shifts without touching `H`.

use num_complex::Complex64;

use super::shifts::ShiftSet;
use super::SolverError;

/// Rescaling applied after an update so that the slowest shift becomes the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSwitch {
    pub from: usize,
    pub to: usize,
    /// The new seed value `z_to`.
    pub z_seed: Complex64,
    /// `π_{n+1}` of the new seed before rescaling.
    pub pi_new: Complex64,
    /// `π_n` of the new seed before rescaling.
    pub pi_old: Complex64,
}

impl SeedSwitch {
    /// Whether the seed actually moved, as opposed to a renormalisation in place.
    pub fn changed_seed(&self) -> bool {
        self.from != self.to
    }
}

/// Coefficients of one iteration `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Seed value in effect during this iteration.
    pub z_seed: Complex64,
    /// `α_n`
    pub alpha: Complex64,
    /// `β_{n-1}`, zero at `n = 0`.
    pub beta_prev: Complex64,
    /// `α_{n-1}` as held by the state (after any rescaling), one at `n = 0`.
    pub alpha_prev: Complex64,
    /// `ρ_n`
    pub rho: Complex64,
    /// `P r_n`
    pub projected_residual: Vec<Complex64>,
    /// `|r_{n+1}|` after the seed switch.
    pub residual_norm: f64,
    pub switch: Option<SeedSwitch>,
}

impl IterationRecord {
    /// `α_n β_{n-1} / α_{n-1}`
    pub(crate) fn three_term_ratio(&self) -> Complex64 {
        if self.beta_prev == Complex64::new(0.0, 0.0) {
            Complex64::new(0.0, 0.0)
        } else {
            self.alpha * self.beta_prev / self.alpha_prev
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientLog {
    /// Full vector dimension `M`.
    pub dim: usize,
    /// Rows of the projection.
    pub m_left: usize,
    /// Number of shifts of the run that produced the log.
    pub n_eq: usize,
    /// Initial seed `z_0`.
    pub z_initial: Complex64,
    /// Absolute convergence threshold the run used.
    pub threshold: f64,
    pub records: Vec<IterationRecord>,
}

impl CoefficientLog {
    pub(crate) fn new(dim: usize, m_left: usize, n_eq: usize, z_initial: Complex64, threshold: f64) -> Self {
        Self {
            dim,
            m_left,
            n_eq,
            z_initial,
            threshold,
            records: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `P b`, the projected residual of the first iteration.
    pub fn projected_rhs(&self) -> Option<&[Complex64]> {
        self.records.first().map(|r| r.projected_residual.as_slice())
    }

    /// Seed values after each switch, as `(iteration, z_seed)`.
    pub fn seed_history(&self) -> Vec<(usize, Complex64)> {
        std::iter::once((0, self.z_initial))
            .chain(self.records.iter().enumerate().filter_map(|(n, r)| {
                r.switch
                    .filter(SeedSwitch::changed_seed)
                    .map(|s| (n + 1, s.z_seed))
            }))
            .collect()
    }

    pub(crate) fn replay_into(&self, shifts: &mut ShiftSet) -> Result<(), SolverError> {
        for (n, rec) in self.records.iter().enumerate() {
            if rec.projected_residual.len() != self.m_left {
                return Err(SolverError::CorruptLog(format!(
                    "iteration {n} has {} projected components, expected {}",
                    rec.projected_residual.len(),
                    self.m_left
                )));
            }
            shifts.advance(rec, &rec.projected_residual, n)?;
            if let Some(sw) = rec.switch {
                shifts.rescale(sw.pi_new, sw.pi_old);
            }
            shifts.freeze_converged(rec.residual_norm, self.threshold);
        }
        Ok(())
    }
}

/// Projected solutions recomputed from a log.
#[derive(Debug, Clone, PartialEq)]
pub struct Recalculated {
    /// One `m_left` vector per requested shift.
    pub solutions: Vec<Vec<Complex64>>,
    /// Replayed residual norm per shift.
    pub residuals: Vec<f64>,
    /// Whether each shift reached the log's threshold during replay.
    pub converged: Vec<bool>,
}

/// Solutions at arbitrary absolute shifts `z` from a completed run's log.
pub fn recalc(log: &CoefficientLog, shifts: &[Complex64]) -> Result<Recalculated, SolverError> {
    if log.is_empty() {
        return Err(SolverError::EmptyLog);
    }
    if shifts.is_empty() {
        return Err(SolverError::NoShifts);
    }
    let mut set = ShiftSet::new(shifts, log.m_left);
    log.replay_into(&mut set)?;
    let last_norm = log.records.last().map_or(0.0, |r| r.residual_norm);
    let residuals = set.residuals(last_norm);
    let converged = (0..set.len()).map(|k| set.is_frozen(k)).collect();
    Ok(Recalculated {
        solutions: set.into_solutions(),
        residuals,
        converged,
    })
}
