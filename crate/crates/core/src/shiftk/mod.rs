//! The `shiftk` program: Green's function spectra `G(ω) = v† (ω - H)^{-1} v`
//! driven by a namelist input file.
//!
//! Modes (`calctype`):
//! - `normal`: solve from scratch and save the coefficient log;
//! - `recalc`: recompute `G` on a new grid from the saved log, with no
//!   matrix-vector products;
//! - `restart`: continue a previous run for another `maxloops` iterations.
//!   Needs `outrestart = .TRUE.` in the earlier run.
//!
//! Files written relative to the working directory: `residual.dat`, and in
//! `output/`: `dynamicalG.dat`, `ResVec.dat`, `TriDiagComp.dat`, plus
//! `RestartVec.dat` when `outrestart` is set. See [`files`] for formats.

pub mod files;
pub mod namelist;

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use namelist::{frequency_grid, parse_input, parse_str, CalcType, InputConfig, ParseError};

use crate::contour::{self, ContourConfig, ContourError, ContourResult};
use crate::linalg::{market, CountingOperator, LinearOperator, MarketError, SparseMatrix};
use crate::models::{build_hamiltonian, ModelError, SpinChainParams};
use crate::solvers::{
    self, Method, ProjectionSpec, SolverError, SolverOptions, SolverState, StepStatus,
};

pub const OUTPUT_DIR: &str = "output";
pub const RESIDUAL_FILE: &str = "residual.dat";
pub const GREEN_FILE: &str = "dynamicalG.dat";
pub const RESVEC_FILE: &str = "ResVec.dat";
pub const TRIDIAG_FILE: &str = "TriDiagComp.dat";
pub const RESTART_FILE: &str = "RestartVec.dat";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{}: {error}", path.display())]
    Market { path: PathBuf, error: MarketError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Contour(#[from] ContourError),
}

impl RunError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        RunError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }

    /// Process exit status: 2 for bad input, 3 for a solver breakdown.
    pub fn exit_code(&self) -> i32 {
        let breakdown = |e: &SolverError| matches!(e, SolverError::Breakdown { .. });
        match self {
            RunError::Solver(e) if breakdown(e) => 3,
            RunError::Model(ModelError::Solver(e)) if breakdown(e) => 3,
            RunError::Contour(ContourError::Solver { error, .. }) if breakdown(error) => 3,
            RunError::Contour(ContourError::Unconverged { .. } | ContourError::EmptySubspace) => 3,
            _ => 2,
        }
    }
}

/// Summary of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub calctype: CalcType,
    pub method: Option<Method>,
    pub dim: usize,
    /// Total iterations in the log after the run.
    pub iterations: usize,
    /// Grid indices whose residual stayed above the threshold.
    pub unconverged: Vec<usize>,
    /// Matrix-vector products performed by this run.
    pub spmv_calls: usize,
    /// Seed of the random initial vector, when one was generated.
    pub random_seed: Option<u64>,
    pub frequencies: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

impl RunReport {
    pub fn converged(&self) -> bool {
        self.unconverged.is_empty()
    }
}

fn resolve(workdir: &Path, name: &str) -> PathBuf {
    let p = Path::new(name);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        workdir.join(p)
    }
}

/// The Hamiltonian named by the input: a Matrix Market file or the spin chain.
pub fn load_hamiltonian(config: &InputConfig, workdir: &Path) -> Result<SparseMatrix, RunError> {
    match (&config.filename.inham, &config.ham) {
        (Some(name), _) => {
            let path = resolve(workdir, name);
            market::read(&path)
                .and_then(|o| o.into_matrix())
                .map_err(|error| RunError::Market { path, error })
        }
        (None, Some(ham)) => {
            let params = SpinChainParams {
                nsite: ham.nsite,
                jx: ham.jx,
                jy: ham.jy,
                jz: ham.jz,
                dz: ham.dz,
                two_sz: ham.two_sz,
            };
            Ok(build_hamiltonian(&params)?.0)
        }
        (None, None) => Err(RunError::Input(
            "no Hamiltonian: give inham in &filename or a &ham section".into(),
        )),
    }
}

/// Normalised random vector from a seeded ChaCha generator.
pub fn random_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n = crate::linalg::norm2(&v);
    v.iter_mut().for_each(|z| *z /= n);
    v
}

/// The initial vector: `invec` if given, otherwise random with `rndseed`.
pub fn load_vector(config: &InputConfig, workdir: &Path, dim: usize) -> Result<(Vec<Complex64>, Option<u64>), RunError> {
    match &config.filename.invec {
        Some(name) => {
            let path = resolve(workdir, name);
            let v = market::read(&path)
                .and_then(|o| o.into_vector())
                .map_err(|error| RunError::Market { path: path.clone(), error })?;
            if v.len() != dim {
                return Err(RunError::Input(format!(
                    "{}: vector length {} does not match the Hamiltonian dimension {dim}",
                    path.display(),
                    v.len()
                )));
            }
            Ok((v.into_inner(), None))
        }
        None => Ok((random_vector(dim, config.dyn_.rndseed), Some(config.dyn_.rndseed))),
    }
}

/// Executes the input in `workdir`.
pub fn run(config: &InputConfig, workdir: &Path) -> Result<RunReport, RunError> {
    let outdir = workdir.join(OUTPUT_DIR);
    std::fs::create_dir_all(&outdir).map_err(|e| RunError::io(&outdir, e))?;
    let grid = frequency_grid(config.dyn_.omegamin, config.dyn_.omegamax, config.dyn_.nomega);
    match config.dyn_.calctype {
        CalcType::Recalc => run_recalc(&outdir, grid),
        calctype => run_solver(config, workdir, &outdir, grid, calctype),
    }
}

fn resvec_path(outdir: &Path) -> PathBuf {
    let p = outdir.join(RESVEC_FILE);
    let legacy = outdir.join(format!("{RESVEC_FILE}0"));
    if !p.exists() && legacy.exists() {
        legacy
    } else {
        p
    }
}

fn run_recalc(outdir: &Path, grid: Vec<Complex64>) -> Result<RunReport, RunError> {
    let log = files::read_log(&outdir.join(TRIDIAG_FILE), &resvec_path(outdir))?;
    if log.m_left != 1 {
        return Err(RunError::Input(format!(
            "coefficient log has {} projected rows; shiftk logs have 1",
            log.m_left
        )));
    }
    let re = solvers::recalc(&log, &grid)?;
    let values: Vec<Complex64> = re.solutions.iter().map(|y| y[0]).collect();
    files::write_dynamical_g(&outdir.join(GREEN_FILE), &grid, &values)?;
    let unconverged = re
        .converged
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(k, _)| k)
        .collect();
    Ok(RunReport {
        calctype: CalcType::Recalc,
        method: None,
        dim: log.dim,
        iterations: log.len(),
        unconverged,
        spmv_calls: 0,
        random_seed: None,
        frequencies: grid,
        values,
    })
}

fn run_solver(
    config: &InputConfig,
    workdir: &Path,
    outdir: &Path,
    grid: Vec<Complex64>,
    calctype: CalcType,
) -> Result<RunReport, RunError> {
    let h = CountingOperator::new(load_hamiltonian(config, workdir)?);
    let dim = h.dim();
    let (b, random_seed) = load_vector(config, workdir, dim)?;
    let method = Method::for_operator(h.symmetry(), h.is_real());
    let options = SolverOptions {
        max_iter: config.maxloops(dim),
        threshold: config.threshold(),
        relative: false,
        log: true,
    };
    let projection = ProjectionSpec::bra(&b);
    let mut state = match calctype {
        CalcType::Restart => {
            let cp = files::read_checkpoint(&outdir.join(RESTART_FILE))?;
            if cp.method != method {
                return Err(RunError::Input(format!(
                    "checkpoint was written by {} but this Hamiltonian selects {method}",
                    cp.method
                )));
            }
            let log = files::read_log(&outdir.join(TRIDIAG_FILE), &resvec_path(outdir))?;
            SolverState::restart(&grid, projection, options, cp, log)?
        }
        _ => SolverState::init(method, &grid, b, projection, options)?,
    };

    let mut q = vec![Complex64::new(0.0, 0.0); dim];
    let mut qs = (method == Method::Bicg).then(|| vec![Complex64::new(0.0, 0.0); dim]);
    let mut history = Vec::new();
    if !state.shifts().all_frozen() {
        loop {
            h.apply(state.residual(), &mut q);
            if let (Some(qs), Some(rs)) = (qs.as_mut(), state.shadow_residual()) {
                h.apply_adjoint(rs, qs);
            }
            let out = state.update(&mut q, qs.as_deref_mut())?;
            history.push((out.iteration, out.max_residual, out.seed_index));
            if out.status != StepStatus::Iterating {
                break;
            }
        }
    }

    let comment = random_seed.map(|seed| format!("random initial vector, rndseed = {seed}"));
    files::write_residuals(&workdir.join(RESIDUAL_FILE), comment.as_deref(), &history)?;
    if config.dyn_.outrestart {
        files::write_checkpoint(&outdir.join(RESTART_FILE), &state.checkpoint())?;
    }
    let threshold = state.threshold();
    let fin = state.finalize();
    let log = fin.log.expect("shiftk always logs");
    let values: Vec<Complex64> = fin.solutions.iter().map(|y| y[0]).collect();
    files::write_dynamical_g(&outdir.join(GREEN_FILE), &grid, &values)?;
    files::write_log(&outdir.join(TRIDIAG_FILE), &log)?;
    files::write_projected_residuals(&outdir.join(RESVEC_FILE), &log)?;
    let unconverged = fin
        .residuals
        .iter()
        .enumerate()
        .filter(|(_, &r)| !(r < threshold))
        .map(|(k, _)| k)
        .collect();
    Ok(RunReport {
        calctype,
        method: Some(method),
        dim,
        iterations: fin.iterations,
        unconverged,
        spmv_calls: h.calls(),
        random_seed,
        frequencies: grid,
        values,
    })
}

/// Options of the `contour` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourArgs {
    pub gamma: Complex64,
    pub rho: f64,
    pub n_z: usize,
    pub n_k: usize,
    pub n_l: usize,
    pub cutoff: f64,
    pub seed: u64,
}

impl Default for ContourArgs {
    fn default() -> Self {
        Self {
            gamma: Complex64::new(-5.0, 0.0),
            rho: 0.8,
            n_z: 100,
            n_k: 10,
            n_l: 5,
            cutoff: 1e-3,
            seed: 0,
        }
    }
}

/// Interior eigenpairs of the input's Hamiltonian.
pub fn run_contour(config: &InputConfig, args: &ContourArgs, workdir: &Path) -> Result<ContourResult, RunError> {
    let h = load_hamiltonian(config, workdir)?;
    let mut cfg = ContourConfig::new(args.gamma, args.rho, args.n_z, args.n_k, args.n_l);
    cfg.svd_cutoff = args.cutoff;
    cfg.seed = args.seed;
    cfg.options = cfg
        .options
        .with_threshold(config.threshold())
        .with_max_iter(config.cg.maxloops.unwrap_or(100 * h.dim().max(1)));
    Ok(contour::contour_eigensolve(&h, &cfg)?)
}

/// Text table of a contour run.
pub fn format_contour(result: &ContourResult) -> String {
    let mut s = format!("# subspace rank {}\n# eigenvalue residual\n", result.rank);
    for p in &result.pairs {
        s.push_str(&format!("{:.16e} {:.6e}", p.value, p.residual));
        if p.near_boundary {
            s.push_str(" # near contour");
        }
        s.push('\n');
    }
    s
}
