#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shifted_krylov::linalg::{Duplicates, SparseMatrix, Symmetry};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn random_real_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.random_range(-1.0..1.0), 0.0)).collect()
}

/// Dense random Hermitian matrix, entries in the unit box.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> SparseMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, c(rng.random_range(-1.0..1.0), 0.0)));
        for j in 0..i {
            t.push((i, j, random_complex(rng)));
        }
    }
    SparseMatrix::from_triplets(n, t, Symmetry::Hermitian, Duplicates::Reject).unwrap()
}

pub fn random_real_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SparseMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..=i {
            t.push((i, j, c(rng.random_range(-1.0..1.0), 0.0)));
        }
    }
    SparseMatrix::from_triplets(n, t, Symmetry::Hermitian, Duplicates::Reject).unwrap()
}

pub fn random_complex_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SparseMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..=i {
            t.push((i, j, random_complex(rng)));
        }
    }
    SparseMatrix::from_triplets(n, t, Symmetry::Symmetric, Duplicates::Reject).unwrap()
}

pub fn random_general(rng: &mut ChaCha8Rng, n: usize) -> SparseMatrix {
    let t: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, random_complex(rng)))
        .collect();
    SparseMatrix::from_triplets(n, t, Symmetry::General, Duplicates::Reject).unwrap()
}

pub fn dense(h: &SparseMatrix) -> DMatrix<Complex64> {
    shifted_krylov::models::dense_assemble(h).unwrap()
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn vec_rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    num / den
}

pub fn norm(v: &[Complex64]) -> f64 {
    shifted_krylov::linalg::norm2(v)
}
