//! The reverse-communication state machine.
//!
//! The caller owns the product vector(s): it reads [`SolverState::residual`]
//! (and, for BiCG, [`SolverState::shadow_residual`]), writes `q = H r`
//! (and `q̃ = H† r̃`) and hands them to [`SolverState::update`]. The state keeps
//! only `r_n` and `r_{n-1}` (plus their shadows for BiCG); the product buffers
//! are reused as scratch, so no other length-`M` vector is ever allocated.

use num_complex::Complex64;

use super::log::{CoefficientLog, IterationRecord, SeedSwitch};
use super::shifts::ShiftSet;
use super::{BreakdownKind, Method, ProjectionSpec, SolverError, SolverOptions, TINY};
use crate::linalg::vector::{dot, dot_unconjugated, norm2};
use crate::linalg::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    /// Compute the next product from the updated residual and call `update` again.
    Iterating,
    /// Every shift is below the threshold.
    Converged,
    /// The iteration budget is spent; solutions are usable but unconverged.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub status: StepStatus,
    /// Iterations completed so far.
    pub iteration: usize,
    /// Index of the shift acting as seed after this update.
    pub seed_index: usize,
    /// `max_σ |r^σ|` over all shifts, frozen ones at their freezing value.
    pub max_residual: f64,
    /// Rescaling applied at the end of this update, if any.
    pub switch: Option<SeedSwitch>,
    /// Largest relative change of any unfrozen residual norm across the
    /// rescaling; zero when none was applied.
    pub switch_discontinuity: f64,
}

/// Seed-side vectors and scalars needed to resume a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedCheckpoint {
    pub method: Method,
    pub iteration: usize,
    pub z_seed: Complex64,
    pub alpha_prev: Complex64,
    pub rho_prev: Complex64,
    pub residual: Vec<Complex64>,
    pub residual_prev: Vec<Complex64>,
    pub shadow: Option<(Vec<Complex64>, Vec<Complex64>)>,
}

/// Products of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct Finalized {
    /// Projected solution `y^σ = P x^σ` per shift.
    pub solutions: Vec<DenseVector>,
    pub residuals: Vec<f64>,
    /// `Some` when logging was enabled.
    pub log: Option<CoefficientLog>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
struct Shadow {
    cur: Vec<Complex64>,
    prev: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    method: Method,
    dim: usize,
    iteration: usize,
    max_iter: usize,
    threshold: f64,
    z_seed: Complex64,
    seed_index: usize,
    r_cur: Vec<Complex64>,
    r_prev: Vec<Complex64>,
    shadow: Option<Shadow>,
    alpha_prev: Complex64,
    rho_prev: Complex64,
    residual_norm: f64,
    shifts: ShiftSet,
    projection: ProjectionSpec,
    projected: Vec<Complex64>,
    log: Option<CoefficientLog>,
}

fn validate(
    method: Method,
    shifts: &[Complex64],
    rhs: &[Complex64],
    projection: &ProjectionSpec,
    options: &SolverOptions,
) -> Result<(), SolverError> {
    if shifts.is_empty() {
        return Err(SolverError::NoShifts);
    }
    if !(options.threshold > 0.0 && options.threshold.is_finite()) {
        return Err(SolverError::InvalidThreshold(options.threshold));
    }
    if options.max_iter == 0 {
        return Err(SolverError::InvalidBudget);
    }
    if shifts.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(SolverError::NonFinite("shift"));
    }
    if rhs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(SolverError::NonFinite("right-hand side"));
    }
    if norm2(rhs) == 0.0 {
        return Err(SolverError::ZeroRhs);
    }
    match method {
        Method::CgReal => {
            if rhs.iter().any(|z| z.im != 0.0) {
                return Err(SolverError::Incompatible {
                    method,
                    reason: "complex right-hand side",
                });
            }
            if shifts.iter().any(|z| z.im != 0.0) {
                return Err(SolverError::Incompatible {
                    method,
                    reason: "complex shift",
                });
            }
        }
        Method::CgComplex => {
            if shifts.iter().any(|z| z.im != 0.0) {
                return Err(SolverError::Incompatible {
                    method,
                    reason: "complex shift makes zI - H non-Hermitian",
                });
            }
        }
        Method::Cocg | Method::Bicg => {}
    }
    projection.validate(rhs.len())
}

impl SolverState {
    /// Starts a run for `(z_k I - H) x_k = b`, `k = 0..shifts.len()`, with `z_0` as seed.
    pub fn init(
        method: Method,
        shifts: &[Complex64],
        rhs: impl Into<Vec<Complex64>>,
        projection: ProjectionSpec,
        options: SolverOptions,
    ) -> Result<Self, SolverError> {
        let rhs: Vec<Complex64> = rhs.into();
        validate(method, shifts, &rhs, &projection, &options)?;
        let dim = rhs.len();
        let rhs_norm = norm2(&rhs);
        let threshold = if options.relative {
            options.threshold * rhs_norm
        } else {
            options.threshold
        };
        let shadow = (method == Method::Bicg).then(|| {
            // conj(b) pairs with b through bᵀb, which vanishes for e.g. b = (1, i); fall back to b.
            let use_conj = dot_unconjugated(&rhs, &rhs).norm() > 1e-12 * rhs_norm * rhs_norm;
            let cur: Vec<Complex64> = if use_conj {
                rhs.iter().map(|z| z.conj()).collect()
            } else {
                rhs.clone()
            };
            Shadow {
                cur,
                prev: vec![Complex64::new(0.0, 0.0); dim],
            }
        });
        let m_left = projection.m_left(dim);
        let log = options
            .log
            .then(|| CoefficientLog::new(dim, m_left, shifts.len(), shifts[0], threshold));
        let projected = match projection {
            ProjectionSpec::Full => Vec::new(),
            _ => vec![Complex64::new(0.0, 0.0); m_left],
        };
        Ok(Self {
            method,
            dim,
            iteration: 0,
            max_iter: options.max_iter,
            threshold,
            z_seed: shifts[0],
            seed_index: 0,
            r_cur: rhs,
            r_prev: vec![Complex64::new(0.0, 0.0); dim],
            shadow,
            alpha_prev: Complex64::new(1.0, 0.0),
            rho_prev: Complex64::new(1.0, 0.0),
            residual_norm: rhs_norm,
            shifts: ShiftSet::new(shifts, m_left),
            projection,
            projected,
            log,
        })
    }

    /// Resumes from a checkpoint and the log of the run that wrote it.
    ///
    /// The shifted quantities are rebuilt by replaying `log` for `shifts`, so
    /// the shifts may differ from the original run. `options.max_iter` counts
    /// iterations beyond the checkpoint.
    pub fn restart(
        shifts: &[Complex64],
        projection: ProjectionSpec,
        options: SolverOptions,
        checkpoint: SeedCheckpoint,
        log: CoefficientLog,
    ) -> Result<Self, SolverError> {
        let method = checkpoint.method;
        validate(method, shifts, &checkpoint.residual, &projection, &options)
            .or_else(|e| match e {
                // A converged run can legitimately have a vanishing residual.
                SolverError::ZeroRhs => Ok(()),
                other => Err(other),
            })?;
        let dim = checkpoint.residual.len();
        if log.dim != dim || checkpoint.residual_prev.len() != dim {
            return Err(SolverError::CorruptLog("checkpoint and log dimensions differ".into()));
        }
        if log.len() != checkpoint.iteration {
            return Err(SolverError::CorruptLog(format!(
                "log has {} iterations, checkpoint {}",
                log.len(),
                checkpoint.iteration
            )));
        }
        let m_left = projection.m_left(dim);
        if log.m_left != m_left {
            return Err(SolverError::CorruptLog("projection rows differ from the log".into()));
        }
        let mut set = ShiftSet::new(shifts, m_left);
        log.replay_into(&mut set)?;
        let shadow = match (method, checkpoint.shadow) {
            (Method::Bicg, Some((cur, prev))) => Some(Shadow { cur, prev }),
            (Method::Bicg, None) => {
                return Err(SolverError::CorruptLog("BiCG checkpoint lacks shadow residuals".into()))
            }
            _ => None,
        };
        let residual_norm = norm2(&checkpoint.residual);
        let projected = match projection {
            ProjectionSpec::Full => Vec::new(),
            _ => vec![Complex64::new(0.0, 0.0); m_left],
        };
        let threshold = log.threshold;
        let iteration = checkpoint.iteration;
        let z_seed = checkpoint.z_seed;
        let seed_index = shifts.iter().position(|&z| z == z_seed).unwrap_or(0);
        let mut state = Self {
            method,
            dim,
            iteration,
            max_iter: iteration + options.max_iter,
            threshold,
            z_seed,
            seed_index,
            r_cur: checkpoint.residual,
            r_prev: checkpoint.residual_prev,
            shadow,
            alpha_prev: checkpoint.alpha_prev,
            rho_prev: checkpoint.rho_prev,
            residual_norm,
            shifts: set,
            projection,
            projected,
            log: options.log.then_some(log),
        };
        // Re-anchor on the slowest of the new shifts.
        state.switch_seed();
        Ok(state)
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn seed_index(&self) -> usize {
        self.seed_index
    }

    pub fn z_seed(&self) -> Complex64 {
        self.z_seed
    }

    pub fn shifts(&self) -> &ShiftSet {
        &self.shifts
    }

    /// Seed residual `r_n`: the vector the next product `H r_n` is taken of.
    pub fn residual(&self) -> &[Complex64] {
        &self.r_cur
    }

    pub fn residual_prev(&self) -> &[Complex64] {
        &self.r_prev
    }

    /// Shadow residual `r̃_n` (BiCG only).
    pub fn shadow_residual(&self) -> Option<&[Complex64]> {
        self.shadow.as_ref().map(|s| s.cur.as_slice())
    }

    pub fn seed_residual_norm(&self) -> f64 {
        self.residual_norm
    }

    /// `|r_n| / |π_n^σ|` per shift; frozen shifts report the norm at freezing.
    pub fn get_residual(&self) -> Vec<f64> {
        self.shifts.residuals(self.residual_norm)
    }

    pub fn projected_solution(&self, k: usize) -> &[Complex64] {
        self.shifts.solution(k)
    }

    pub fn log(&self) -> Option<&CoefficientLog> {
        self.log.as_ref()
    }

    pub fn checkpoint(&self) -> SeedCheckpoint {
        SeedCheckpoint {
            method: self.method,
            iteration: self.iteration,
            z_seed: self.z_seed,
            alpha_prev: self.alpha_prev,
            rho_prev: self.rho_prev,
            residual: self.r_cur.clone(),
            residual_prev: self.r_prev.clone(),
            shadow: self.shadow.as_ref().map(|s| (s.cur.clone(), s.prev.clone())),
        }
    }

    fn inner(&self, left: &[Complex64], right: &[Complex64]) -> Complex64 {
        match self.method {
            Method::Cocg => dot_unconjugated(left, right),
            _ => dot(left, right),
        }
    }

    /// One iteration. `q` must hold `H r_n`; for BiCG `shadow_q` must hold
    /// `H† r̃_n`. Both buffers are overwritten.
    pub fn update(
        &mut self,
        q: &mut [Complex64],
        shadow_q: Option<&mut [Complex64]>,
    ) -> Result<StepOutcome, SolverError> {
        if q.len() != self.dim {
            return Err(SolverError::Dimension {
                expected: self.dim,
                found: q.len(),
            });
        }
        if self.iteration >= self.max_iter {
            return Ok(self.outcome(StepStatus::BudgetExhausted, None, 0.0));
        }
        if self.shifts.all_frozen() {
            return Ok(self.outcome(StepStatus::Converged, None, 0.0));
        }
        let shadow_q = match (&self.shadow, shadow_q) {
            (Some(_), Some(sq)) if sq.len() == self.dim => Some(sq),
            (Some(_), Some(sq)) => {
                return Err(SolverError::Dimension {
                    expected: self.dim,
                    found: sq.len(),
                })
            }
            (Some(_), None) => return Err(SolverError::MissingShadowProduct),
            (None, _) => None,
        };
        let n = self.iteration;
        let z = self.z_seed;

        let rho = {
            let left = self.shadow.as_ref().map_or(self.r_cur.as_slice(), |s| &s.cur);
            self.inner(left, &self.r_cur)
        };
        if rho.norm() < TINY {
            return Err(SolverError::Breakdown {
                iteration: n,
                kind: BreakdownKind::Rho,
            });
        }
        let beta_prev = if n == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            rho / self.rho_prev
        };

        // q ← A r_n with A = z_seed I - H.
        for (qi, ri) in q.iter_mut().zip(&self.r_cur) {
            *qi = z * ri - *qi;
        }
        let r_a_r = {
            let left = self.shadow.as_ref().map_or(self.r_cur.as_slice(), |s| &s.cur);
            self.inner(left, q)
        };
        let denom = if n == 0 {
            r_a_r
        } else {
            r_a_r - beta_prev / self.alpha_prev * rho
        };
        if denom.norm() < TINY {
            return Err(SolverError::Breakdown {
                iteration: n,
                kind: BreakdownKind::AlphaDenominator,
            });
        }
        let alpha = rho / denom;

        let mut record = IterationRecord {
            z_seed: z,
            alpha,
            beta_prev,
            alpha_prev: self.alpha_prev,
            rho,
            projected_residual: Vec::new(),
            residual_norm: 0.0,
            switch: None,
        };

        let projected: &[Complex64] = match &self.projection {
            ProjectionSpec::Full => &self.r_cur,
            p => {
                p.apply_into(&self.r_cur, &mut self.projected);
                &self.projected
            }
        };
        self.shifts.advance(&record, projected, n)?;
        if self.log.is_some() {
            record.projected_residual = projected.to_vec();
        }

        // Three-term recurrence: r_{n+1} = (1 + c) r_n - α A r_n - c r_{n-1}.
        let c = record.three_term_ratio();
        let one_c = Complex64::new(1.0, 0.0) + c;
        for ((qi, ri), rpi) in q.iter_mut().zip(&self.r_cur).zip(&self.r_prev) {
            *qi = one_c * ri - alpha * *qi - c * rpi;
        }
        std::mem::swap(&mut self.r_prev, &mut self.r_cur);
        self.r_cur.copy_from_slice(q);

        if let (Some(sh), Some(sq)) = (self.shadow.as_mut(), shadow_q) {
            let zc = z.conj();
            let (cc, ac, one_cc) = (c.conj(), alpha.conj(), one_c.conj());
            for ((qi, ri), rpi) in sq.iter_mut().zip(&sh.cur).zip(&sh.prev) {
                let a_r = zc * ri - *qi;
                *qi = one_cc * ri - ac * a_r - cc * rpi;
            }
            std::mem::swap(&mut sh.prev, &mut sh.cur);
            sh.cur.copy_from_slice(sq);
        }

        self.residual_norm = norm2(&self.r_cur);
        self.alpha_prev = alpha;
        self.rho_prev = rho;
        self.iteration += 1;

        let before = self.shifts.residuals(self.residual_norm);
        let switch = self.switch_seed();
        let discontinuity = if switch.is_some() {
            let after = self.shifts.residuals(self.residual_norm);
            before
                .iter()
                .zip(&after)
                .enumerate()
                .filter(|(k, _)| !self.shifts.is_frozen(*k))
                .map(|(_, (b, a))| ((a - b) / b).abs())
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        self.shifts.freeze_converged(self.residual_norm, self.threshold);

        record.residual_norm = self.residual_norm;
        record.switch = switch;
        if let Some(log) = self.log.as_mut() {
            log.records.push(record);
        }

        let status = if self.shifts.all_frozen() {
            StepStatus::Converged
        } else if self.iteration >= self.max_iter {
            StepStatus::BudgetExhausted
        } else {
            StepStatus::Iterating
        };
        Ok(self.outcome(status, switch, discontinuity))
    }

    /// Makes the unfrozen shift with the smallest `|π|` the seed, rescaling the
    /// seed residuals and coefficients so that its `π` pair becomes `(1, 1)`.
    fn switch_seed(&mut self) -> Option<SeedSwitch> {
        let s = self.shifts.slowest()?;
        let (pi_new, pi_old) = self.shifts.pi_pair(s);
        let one = Complex64::new(1.0, 0.0);
        if pi_new == one && pi_old == one {
            self.seed_index = s;
            return None;
        }
        let inv_new = one / pi_new;
        let inv_old = one / pi_old;
        for r in &mut self.r_cur {
            *r *= inv_new;
        }
        for r in &mut self.r_prev {
            *r *= inv_old;
        }
        if let Some(sh) = self.shadow.as_mut() {
            let (a, b) = (inv_new.conj(), inv_old.conj());
            sh.cur.iter_mut().for_each(|r| *r *= a);
            sh.prev.iter_mut().for_each(|r| *r *= b);
        }
        self.alpha_prev = self.alpha_prev * pi_old / pi_new;
        self.rho_prev /= pi_old * pi_old;
        self.residual_norm /= pi_new.norm();
        self.shifts.rescale(pi_new, pi_old);
        let switch = SeedSwitch {
            from: self.seed_index,
            to: s,
            z_seed: self.shifts.values()[s],
            pi_new,
            pi_old,
        };
        self.z_seed = switch.z_seed;
        self.seed_index = s;
        Some(switch)
    }

    fn outcome(&self, status: StepStatus, switch: Option<SeedSwitch>, discontinuity: f64) -> StepOutcome {
        let max_residual = self
            .shifts
            .residuals(self.residual_norm)
            .into_iter()
            .fold(0.0, f64::max);
        StepOutcome {
            status,
            iteration: self.iteration,
            seed_index: self.seed_index,
            max_residual,
            switch,
            switch_discontinuity: discontinuity,
        }
    }

    /// Consumes the state, returning the projected solutions and the log.
    pub fn finalize(self) -> Finalized {
        let residuals = self.get_residual();
        Finalized {
            solutions: self.shifts.into_solutions().into_iter().map(DenseVector::from).collect(),
            residuals,
            log: self.log,
            iterations: self.iteration,
        }
    }
}
