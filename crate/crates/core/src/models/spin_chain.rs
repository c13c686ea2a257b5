//! Periodic spin-1/2 XYZ chain with a z-axis Dzyaloshinskii-Moriya term.
//!
//! Basis states are `L`-bit integers, bit `j` set meaning site `j` is up.
//! Within a sector the states are kept in ascending integer order.

use num_complex::Complex64;

use super::ModelError;
use crate::linalg::{Duplicates, SparseMatrix, Symmetry};

/// Largest chain the builder accepts.
pub const MAX_SITES: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainParams {
    pub nsite: usize,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub dz: f64,
    /// `Σ_j 2 S^z_j`; `None` for the full `2^L` space.
    pub two_sz: Option<i32>,
}

impl SpinChainParams {
    /// Isotropic Heisenberg chain with coupling `j`.
    pub fn heisenberg(nsite: usize, j: f64) -> Self {
        Self {
            nsite,
            jx: j,
            jy: j,
            jz: j,
            dz: 0.0,
            two_sz: None,
        }
    }

    pub fn with_sector(mut self, two_sz: i32) -> Self {
        self.two_sz = Some(two_sz);
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let l = self.nsite;
        if l < 2 {
            return Err(ModelError::InvalidParams(format!("nsite = {l}, need at least 2")));
        }
        if l > MAX_SITES {
            return Err(ModelError::InvalidParams(format!("nsite = {l} exceeds {MAX_SITES}")));
        }
        for (name, v) in [("Jx", self.jx), ("Jy", self.jy), ("Jz", self.jz), ("Dz", self.dz)] {
            if !v.is_finite() {
                return Err(ModelError::InvalidParams(format!("{name} is not finite")));
            }
        }
        if let Some(t) = self.two_sz {
            if t.unsigned_abs() as usize > l || (t.rem_euclid(2) as usize) != l % 2 {
                return Err(ModelError::EmptySector { nsite: l, two_sz: t });
            }
            if self.jx != self.jy {
                return Err(ModelError::InvalidParams(
                    "Jx != Jy does not conserve total Sz; drop the sector restriction".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    nsite: usize,
    two_sz: Option<i32>,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(nsite: usize, two_sz: Option<i32>) -> Result<Self, ModelError> {
        if !(1..=MAX_SITES).contains(&nsite) {
            return Err(ModelError::InvalidParams(format!("nsite = {nsite}")));
        }
        let states: Vec<u32> = match two_sz {
            None => (0..1u32 << nsite).collect(),
            Some(t) => {
                let up2 = nsite as i64 + t as i64;
                if up2 < 0 || up2 > 2 * nsite as i64 || up2 % 2 != 0 {
                    return Err(ModelError::EmptySector { nsite, two_sz: t });
                }
                fixed_popcount(nsite, (up2 / 2) as u32)
            }
        };
        Ok(Self { nsite, two_sz, states })
    }

    pub fn nsite(&self) -> usize {
        self.nsite
    }

    pub fn two_sz(&self) -> Option<i32> {
        self.two_sz
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn index_of(&self, state: u32) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// `S^z_j` of `state`: `+1/2` when bit `j` is set.
    pub fn sz(state: u32, site: usize) -> f64 {
        if state >> site & 1 == 1 {
            0.5
        } else {
            -0.5
        }
    }
}

/// All `nsite`-bit integers with `n_up` bits set, ascending.
fn fixed_popcount(nsite: usize, n_up: u32) -> Vec<u32> {
    if n_up == 0 {
        return vec![0];
    }
    let limit = 1u64 << nsite;
    let mut v: u64 = (1u64 << n_up) - 1;
    let mut out = Vec::new();
    while v < limit {
        out.push(v as u32);
        // Next integer with the same popcount.
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Hamiltonian of the chain in the basis of `params.two_sz`, Hermitian-tagged.
pub fn build_hamiltonian(params: &SpinChainParams) -> Result<(SparseMatrix, SectorBasis), ModelError> {
    params.validate()?;
    let basis = SectorBasis::new(params.nsite, params.two_sz)?;
    let l = params.nsite;
    let flip = (params.jx + params.jy) / 4.0;
    let pair = (params.jx - params.jy) / 4.0;
    let dm = params.dz / 2.0;
    // S+_i S-_j and S-_i S+_j amplitudes, DM term included.
    let up_down = Complex64::new(flip, dm);
    let down_up = Complex64::new(flip, -dm);

    let mut triplets = Vec::new();
    for (col, &s) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for i in 0..l {
            let j = (i + 1) % l;
            diag += params.jz * SectorBasis::sz(s, i) * SectorBasis::sz(s, j);
            let (bi, bj) = (s >> i & 1, s >> j & 1);
            let mask = (1u32 << i) | (1u32 << j);
            let mut push = |t: u32, v: Complex64| {
                if v != Complex64::new(0.0, 0.0) {
                    if let Some(row) = basis.index_of(t) {
                        triplets.push((row, col, v));
                    }
                }
            };
            match (bi, bj) {
                (0, 1) => push(s ^ mask, up_down),
                (1, 0) => push(s ^ mask, down_up),
                _ => push(s ^ mask, Complex64::new(pair, 0.0)),
            }
        }
        triplets.push((col, col, Complex64::new(diag, 0.0)));
    }
    let h = SparseMatrix::from_triplets(basis.dim(), triplets, Symmetry::General, Duplicates::Sum)?
        .with_symmetry(Symmetry::Hermitian)?;
    Ok((h, basis))
}

/// `S^z(q) φ = Σ_j e^{iqj} S^z_j φ`, diagonal in the configuration basis.
pub fn szq_vector(basis: &SectorBasis, ground: &[Complex64], q: f64) -> Result<Vec<Complex64>, ModelError> {
    if ground.len() != basis.dim() {
        return Err(ModelError::Dimension {
            expected: basis.dim(),
            found: ground.len(),
        });
    }
    let phases: Vec<Complex64> = (0..basis.nsite())
        .map(|j| Complex64::from_polar(1.0, q * j as f64))
        .collect();
    Ok(basis
        .states()
        .iter()
        .zip(ground)
        .map(|(&s, g)| {
            let c: Complex64 = phases
                .iter()
                .enumerate()
                .map(|(j, p)| p * SectorBasis::sz(s, j))
                .sum();
            c * g
        })
        .collect())
}
