//! Contour-integral interior eigensolver.
//!
//! Resolvent solutions at quadrature points on a circle give filtered moment
//! vectors `s_{k,l} ≈ (H - z_0)^k P_Γ φ_l`, where `P_Γ` projects onto the
//! eigenvectors inside the circle. An SVD of the moment block yields an
//! orthonormal basis of that invariant subspace and Rayleigh-Ritz on it gives
//! the enclosed eigenpairs. Each source costs one shifted BiCG run.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{norm2, DenseVector, LinearOperator};
use crate::models::{dense_eig, ModelError};
use crate::solvers::{self, Method, ProjectionSpec, SolverError, SolverOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct ContourConfig {
    /// Centre `γ`.
    pub gamma: Complex64,
    /// Radius `ρ`.
    pub rho: f64,
    /// Quadrature points `N_z`.
    pub n_z: usize,
    /// Moments per source `N_k`.
    pub n_k: usize,
    /// Source vectors `N_l`.
    pub n_l: usize,
    /// Moment expansion point; `None` uses `γ`.
    pub z0: Option<Complex64>,
    /// Singular values below `svd_cutoff * σ_max` are discarded.
    pub svd_cutoff: f64,
    /// Seed for the random sources.
    pub seed: u64,
    /// `None` selects from the operator's structure.
    pub method: Option<Method>,
    pub options: SolverOptions,
}

impl ContourConfig {
    pub fn new(gamma: Complex64, rho: f64, n_z: usize, n_k: usize, n_l: usize) -> Self {
        Self {
            gamma,
            rho,
            n_z,
            n_k,
            n_l,
            z0: None,
            svd_cutoff: 1e-3,
            seed: 0,
            method: None,
            options: SolverOptions::default().with_convfactor(12).with_max_iter(100_000),
        }
    }

    pub fn validate(&self) -> Result<(), ContourError> {
        let bad = |m: String| Err(ContourError::InvalidConfig(m));
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad(format!("radius must be positive, got {}", self.rho));
        }
        if self.n_z < 4 {
            return bad(format!("need at least 4 quadrature points, got {}", self.n_z));
        }
        if self.n_k == 0 || self.n_l == 0 {
            return bad("n_k and n_l must be at least 1".into());
        }
        if !(self.svd_cutoff >= 0.0 && self.svd_cutoff < 1.0) {
            return bad(format!("svd cutoff must lie in [0, 1), got {}", self.svd_cutoff));
        }
        Ok(())
    }

    pub fn expansion_point(&self) -> Complex64 {
        self.z0.unwrap_or(self.gamma)
    }

    /// `e^{iθ_j}` with `θ_j = 2π (j + 1/2) / N_z`.
    fn phases(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n_z).map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / self.n_z as f64;
            Complex64::from_polar(1.0, theta)
        })
    }

    /// `z_j = γ + ρ e^{iθ_j}`.
    pub fn quadrature_points(&self) -> Vec<Complex64> {
        self.phases().map(|p| self.gamma + self.rho * p).collect()
    }

    /// Whether `λ` lies strictly inside the circle.
    pub fn encloses(&self, lambda: Complex64) -> bool {
        (lambda - self.gamma).norm() < self.rho
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("invalid contour configuration: {0}")]
    InvalidConfig(String),
    #[error("source {source_index}: {error}")]
    Solver { source_index: usize, error: SolverError },
    #[error("source {source_index} did not converge at quadrature point {point} (residual {residual:e})")]
    Unconverged { source_index: usize, point: usize, residual: f64 },
    #[error("no singular value above the cutoff: the contour encloses no eigenvalue or the sources miss it")]
    EmptySubspace,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Reproducible random sources with entries uniform in the unit box.
pub fn random_sources(dim: usize, n_l: usize, seed: u64) -> Vec<DenseVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_l)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

/// `φ'_l(z_j) = (z_j I - H)^{-1} φ_l` for every source `l` and point `j`,
/// indexed `[l][j]`.
pub fn contour_solve_sources<O: LinearOperator + ?Sized>(
    op: &O,
    sources: &[DenseVector],
    config: &ContourConfig,
) -> Result<Vec<Vec<DenseVector>>, ContourError> {
    config.validate()?;
    let points = config.quadrature_points();
    let method = config
        .method
        .unwrap_or_else(|| Method::for_operator(op.symmetry(), op.is_real()));
    sources
        .iter()
        .enumerate()
        .map(|(l, phi)| {
            let out = solvers::solve(method, op, &points, phi, ProjectionSpec::Full, config.options)
                .map_err(|error| ContourError::Solver { source_index: l, error })?;
            if let Some((j, &r)) = out
                .residuals
                .iter()
                .enumerate()
                .find(|(_, &r)| !(r < config.options.threshold))
            {
                return Err(ContourError::Unconverged {
                    source_index: l,
                    point: j,
                    residual: r,
                });
            }
            Ok(out.solutions)
        })
        .collect()
}

/// Moment vectors `s_{k,l}`, column `k * N_l + l` of an `M × N_k N_l` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBlock {
    pub n_k: usize,
    pub n_l: usize,
    pub matrix: DMatrix<Complex64>,
}

impl MomentBlock {
    pub fn vector(&self, k: usize, l: usize) -> Vec<Complex64> {
        self.matrix.column(k * self.n_l + l).iter().copied().collect()
    }
}

/// `s_{k,l} = (1/N_z) Σ_j ρ e^{iθ_j} (z_j - z_0)^k φ'_l(z_j)`.
pub fn moments(solutions: &[Vec<DenseVector>], config: &ContourConfig) -> Result<MomentBlock, ContourError> {
    config.validate()?;
    let n_l = solutions.len();
    if n_l == 0 {
        return Err(ContourError::InvalidConfig("no source solutions".into()));
    }
    let dim = solutions[0].first().map_or(0, |v| v.len());
    if solutions.iter().any(|s| s.len() != config.n_z) {
        return Err(ContourError::InvalidConfig(format!(
            "expected {} quadrature solutions per source",
            config.n_z
        )));
    }
    let z0 = config.expansion_point();
    let points = config.quadrature_points();
    let weights: Vec<Complex64> = config.phases().map(|p| config.rho * p / config.n_z as f64).collect();
    let mut matrix = DMatrix::zeros(dim, config.n_k * n_l);
    for (l, sols) in solutions.iter().enumerate() {
        for (j, x) in sols.iter().enumerate() {
            let mut w = weights[j];
            let d = points[j] - z0;
            for k in 0..config.n_k {
                let mut col = matrix.column_mut(k * n_l + l);
                for (s, xi) in col.iter_mut().zip(x.iter()) {
                    *s += w * xi;
                }
                w *= d;
            }
        }
    }
    Ok(MomentBlock {
        n_k: config.n_k,
        n_l,
        matrix,
    })
}

/// Orthonormal filtered basis `Ũ` and the projected operator `H̃ = Ũ† H Ũ`.
#[derive(Debug, Clone)]
pub struct Projected {
    pub basis: DMatrix<Complex64>,
    pub reduced: DMatrix<Complex64>,
    /// All singular values of the moment block, descending.
    pub singular_values: Vec<f64>,
}

pub fn filter_and_project<O: LinearOperator + ?Sized>(
    block: &MomentBlock,
    op: &O,
    cutoff: f64,
) -> Result<Projected, ContourError> {
    let s = &block.matrix;
    if s.nrows() != op.dim() {
        return Err(ModelError::Dimension {
            expected: op.dim(),
            found: s.nrows(),
        }
        .into());
    }
    if s.ncols() == 0 || s.nrows() == 0 {
        return Err(ContourError::EmptySubspace);
    }
    let svd = s.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    if !(smax > 0.0) {
        return Err(ContourError::EmptySubspace);
    }
    let keep: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] > cutoff * smax)
        .collect();
    let basis = DMatrix::from_fn(s.nrows(), keep.len(), |r, c| u[(r, keep[c])]);
    let mut hu = DMatrix::zeros(s.nrows(), keep.len());
    let mut out = vec![Complex64::new(0.0, 0.0); s.nrows()];
    for c in 0..keep.len() {
        let col: Vec<Complex64> = basis.column(c).iter().copied().collect();
        op.apply(&col, &mut out);
        hu.column_mut(c).copy_from_slice(&out);
    }
    let reduced = basis.adjoint() * hu;
    Ok(Projected {
        basis,
        reduced,
        singular_values,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RitzPair {
    pub value: f64,
    pub vector: DenseVector,
    /// `|H v - λ v|` with `|v| = 1`.
    pub residual: f64,
    /// Within `0.05 ρ` of the contour, where quadrature error concentrates.
    pub near_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourResult {
    /// Ritz pairs inside the circle, ascending.
    pub pairs: Vec<RitzPair>,
    pub singular_values: Vec<f64>,
    /// Dimension of the filtered subspace.
    pub rank: usize,
}

impl ContourResult {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn has_boundary_warning(&self) -> bool {
        self.pairs.iter().any(|p| p.near_boundary)
    }
}

/// Eigenpairs of Hermitian `H` inside the circle, using random sources.
pub fn contour_eigensolve<O: LinearOperator + ?Sized>(op: &O, config: &ContourConfig) -> Result<ContourResult, ContourError> {
    config.validate()?;
    let sources = random_sources(op.dim(), config.n_l, config.seed);
    contour_eigensolve_with_sources(op, &sources, config)
}

pub fn contour_eigensolve_with_sources<O: LinearOperator + ?Sized>(
    op: &O,
    sources: &[DenseVector],
    config: &ContourConfig,
) -> Result<ContourResult, ContourError> {
    let solutions = contour_solve_sources(op, sources, config)?;
    let block = moments(&solutions, config)?;
    drop(solutions);
    let proj = filter_and_project(&block, op, config.svd_cutoff)?;
    let eig = dense_eig(&proj.reduced)?;
    let dim = op.dim();
    let mut hv = vec![Complex64::new(0.0, 0.0); dim];
    let mut pairs = Vec::new();
    for (j, &lambda) in eig.values.iter().enumerate() {
        let dist = (Complex64::new(lambda, 0.0) - config.gamma).norm();
        if dist >= config.rho {
            continue;
        }
        let y = eig.vectors.column(j);
        let v = &proj.basis * y;
        let mut v: Vec<Complex64> = v.iter().copied().collect();
        let nv = norm2(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        op.apply(&v, &mut hv);
        let res: Vec<Complex64> = hv.iter().zip(&v).map(|(h, x)| h - lambda * x).collect();
        pairs.push(RitzPair {
            value: lambda,
            vector: v.into(),
            residual: norm2(&res),
            near_boundary: config.rho - dist < 0.05 * config.rho,
        });
    }
    Ok(ContourResult {
        pairs,
        singular_values: proj.singular_values,
        rank: proj.basis.ncols(),
    })
}
