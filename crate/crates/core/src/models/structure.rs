//! Dynamical spin structure factor of the chain.

use num_complex::Complex64;

use super::dense::{dense_assemble, dense_eig};
use super::green::{green_diagonal, GreenConfig, SpectrumResult};
use super::spin_chain::{build_hamiltonian, szq_vector, SpinChainParams};
use super::ModelError;
use crate::linalg::norm2;

#[derive(Debug, Clone)]
pub struct StructureFactor {
    /// Excitation energies `ω`.
    pub omega: Vec<f64>,
    /// `S(q, ω, η)`
    pub values: Vec<f64>,
    pub ground_energy: f64,
    /// `|S^z(q) φ_0|²`, the total weight.
    pub weight: f64,
    pub spectrum: SpectrumResult,
}

/// `S(q, ω, η) = (1/π) Im G_bb(ω + E_0 - iη)` with `b = S^z(q) φ_0`.
///
/// `ω` is the excitation energy above the ground state, so peaks sit at
/// `λ_j - E_0` and `S ≥ 0`. The ground state comes from dense diagonalisation.
pub fn structure_factor(
    params: &SpinChainParams,
    q: f64,
    omega: &[f64],
    eta: f64,
    config: &GreenConfig,
) -> Result<StructureFactor, ModelError> {
    if !(eta > 0.0) {
        return Err(ModelError::InvalidParams(format!("broadening must be positive, got {eta}")));
    }
    let (h, basis) = build_hamiltonian(params)?;
    let eig = dense_eig(&dense_assemble(&h)?)?;
    let e0 = eig.values[0];
    let b = szq_vector(&basis, &eig.vector(0), q)?;
    let weight = norm2(&b).powi(2);
    if weight == 0.0 {
        return Ok(StructureFactor {
            omega: omega.to_vec(),
            values: vec![0.0; omega.len()],
            ground_energy: e0,
            weight,
            spectrum: SpectrumResult {
                frequencies: Vec::new(),
                values: Vec::new(),
                residuals: Vec::new(),
                iterations: 0,
                converged: true,
                method: config.method.unwrap_or(crate::solvers::Method::Bicg),
                history: Vec::new(),
                log: None,
            },
        });
    }
    let grid: Vec<Complex64> = omega.iter().map(|&w| Complex64::new(w + e0, -eta)).collect();
    let spectrum = green_diagonal(&h, &b, &grid, config)?;
    let values = spectrum
        .values
        .iter()
        .map(|g| g.im / std::f64::consts::PI)
        .collect();
    Ok(StructureFactor {
        omega: omega.to_vec(),
        values,
        ground_energy: e0,
        weight,
        spectrum,
    })
}
