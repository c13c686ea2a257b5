mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use shifted_krylov::linalg::{dot, norm2, Symmetry};
use shifted_krylov::models::{
    build_hamiltonian, dense_assemble, dense_eig, dense_resolvent, green_diagonal, green_element, structure_factor,
    szq_vector, GreenConfig, SectorBasis, SpinChainParams,
};
use shifted_krylov::solvers::{Method, ProjectionSpec, SolverOptions};

fn eigenvalues(p: &SpinChainParams) -> Vec<f64> {
    let (h, _) = build_hamiltonian(p).unwrap();
    dense_eig(&dense_assemble(&h).unwrap()).unwrap().values
}

#[test]
fn two_site_chain_matches_explicit_matrix() {
    // Periodic L = 2 counts the single bond twice: H = 2 S1·S2.
    let vals = eigenvalues(&SpinChainParams::heisenberg(2, 1.0));
    let expect = [-1.5, 0.5, 0.5, 0.5];
    for (a, b) in vals.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12, "{vals:?}");
    }
    let (h, _) = build_hamiltonian(&SpinChainParams::heisenberg(2, 1.0)).unwrap();
    // |↓↓> = 0, |↑↓> = 1 (site 0 up), |↓↑> = 2, |↑↑> = 3.
    assert_eq!(h.get(0, 0), c(0.5, 0.0));
    assert_eq!(h.get(1, 1), c(-0.5, 0.0));
    assert_eq!(h.get(1, 2), c(1.0, 0.0));
    assert_eq!(h.get(2, 1), c(1.0, 0.0));
}

#[test]
fn heisenberg_twelve_sites_ground_state() {
    let p = SpinChainParams::heisenberg(12, 1.0).with_sector(0);
    let (h, basis) = build_hamiltonian(&p).unwrap();
    assert_eq!(basis.dim(), 924);
    assert!(h.is_real());
    let vals = eigenvalues(&p);
    let table = [-5.387391, -5.031543, -4.777389, -4.569374, -4.569374, -4.297689, -4.297689];
    for (a, b) in vals.iter().zip(table) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn spmv_row_matches_dense_assembly() {
    let (h, _) = build_hamiltonian(&SpinChainParams::heisenberg(12, 1.0).with_sector(0)).unwrap();
    let d = dense_assemble(&h).unwrap();
    let mut e0 = vec![c(0.0, 0.0); h.dim()];
    e0[0] = c(1.0, 0.0);
    let col = h.spmv(&e0).unwrap();
    for i in 0..h.dim() {
        assert_eq!(col[i], d[(i, 0)]);
    }
}

#[test]
fn sector_spectrum_is_subset_of_full() {
    let mut p = SpinChainParams::heisenberg(6, 1.0);
    p.dz = 0.7;
    p.jz = 0.4;
    let full = eigenvalues(&p);
    for t in [-6, -4, -2, 0, 2, 4, 6] {
        for v in eigenvalues(&p.with_sector(t)) {
            assert!(full.iter().any(|f| (f - v).abs() < 1e-10), "sector {t}: {v}");
        }
    }
}

#[test]
fn spectrum_invariant_under_dm_sign_and_translation() {
    let mut p = SpinChainParams::heisenberg(6, 1.0);
    p.dz = 0.8;
    let a = eigenvalues(&p);
    p.dz = -0.8;
    let b = eigenvalues(&p);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10);
    }
    // Cyclic relabelling of sites is a permutation of basis states.
    let (h, basis) = build_hamiltonian(&p).unwrap();
    let l = basis.nsite();
    let rot = |s: u32| ((s << 1) | (s >> (l - 1))) & ((1 << l) - 1);
    let d = dense_assemble(&h).unwrap();
    let n = basis.dim();
    let perm: Vec<usize> = basis.states().iter().map(|&s| basis.index_of(rot(s)).unwrap()).collect();
    let dp = DMatrix::from_fn(n, n, |i, j| d[(perm[i], perm[j])]);
    assert!((&dp - &d).norm() < 1e-12);
}

#[test]
fn anisotropic_chain_full_space() {
    let p = SpinChainParams {
        nsite: 4,
        jx: 1.0,
        jy: 0.5,
        jz: 0.3,
        dz: 0.0,
        two_sz: None,
    };
    let (h, _) = build_hamiltonian(&p).unwrap();
    assert!(h.clone().with_symmetry(Symmetry::Symmetric).is_ok());
}

#[test]
fn szq_on_two_sites() {
    let basis = SectorBasis::new(2, None).unwrap();
    // |↑↓> with site 0 up: S^z(π) = (1/2)(1) + (-1/2)(-1) = 1.
    let mut v = vec![c(0.0, 0.0); 4];
    v[1] = c(1.0, 0.0);
    let out = szq_vector(&basis, &v, std::f64::consts::PI).unwrap();
    assert!((out[1] - c(1.0, 0.0)).norm() < 1e-15);
    let zero = szq_vector(&SectorBasis::new(4, Some(0)).unwrap(), &[c(1.0, 0.0); 6], 0.0).unwrap();
    assert!(norm2(&zero) < 1e-15);
}

#[test]
fn szq_norm_matches_dense_operator() {
    let p = SpinChainParams::heisenberg(8, 1.0).with_sector(0);
    let (h, basis) = build_hamiltonian(&p).unwrap();
    let eig = dense_eig(&dense_assemble(&h).unwrap()).unwrap();
    let phi = eig.vector(0);
    let q = std::f64::consts::PI;
    let b = szq_vector(&basis, &phi, q).unwrap();
    let n = basis.dim();
    let sz = |q: f64| {
        DMatrix::from_fn(n, n, |i, j| {
            if i != j {
                return c(0.0, 0.0);
            }
            (0..8)
                .map(|k| Complex64::from_polar(1.0, q * k as f64) * SectorBasis::sz(basis.states()[i], k))
                .sum()
        })
    };
    let phi_m = nalgebra::DVector::from_column_slice(&phi);
    let expect = (phi_m.adjoint() * sz(-q) * sz(q) * &phi_m)[(0, 0)];
    assert!((expect.re - norm2(&b).powi(2)).abs() < 1e-12);
}

#[test]
fn green_diagonal_matches_spectral_decomposition() {
    let mut r = rng(21);
    let h = random_hermitian(&mut r, 64);
    let a = random_vector(&mut r, 64);
    let eig = dense_eig(&dense(&h)).unwrap();
    let weights: Vec<f64> = (0..64).map(|j| dot(&eig.vector(j), &a).norm_sqr()).collect();
    let grid: Vec<Complex64> = (0..40).map(|k| c(-8.0 + 0.4 * k as f64, 0.1)).collect();
    let cfg = GreenConfig {
        method: None,
        options: SolverOptions::default().with_convfactor(12).with_max_iter(5000),
    };
    let res = green_diagonal(&h, &a, &grid, &cfg).unwrap();
    assert_eq!(res.method, Method::Bicg);
    assert!(res.converged);
    for (z, g) in grid.iter().zip(&res.values) {
        let oracle: Complex64 = eig.values.iter().zip(&weights).map(|(l, w)| *w / (z - l)).sum();
        assert!(rel_err(*g, oracle) < 1e-8);
    }
    // Conjugate symmetry.
    let conj: Vec<Complex64> = grid.iter().map(|z| z.conj()).collect();
    let back = green_diagonal(&h, &a, &conj, &cfg).unwrap();
    for (g, gc) in res.values.iter().zip(&back.values) {
        assert!(rel_err(gc.conj(), *g) < 1e-10);
    }
    // Projection consistency with the full-solution path.
    let full = shifted_krylov::solvers::solve(Method::Bicg, &h, &grid, &a, ProjectionSpec::Full, cfg.options).unwrap();
    for (x, g) in full.solutions.iter().zip(&res.values) {
        assert!(rel_err(dot(&a, x), *g) < 1e-12);
    }
}

#[test]
fn offdiagonal_matches_dense_resolvent() {
    let mut r = rng(22);
    let h = random_hermitian(&mut r, 16);
    let a = random_vector(&mut r, 16);
    let b = random_vector(&mut r, 16);
    let grid = [c(-1.0, 0.3), c(0.5, 0.2)];
    let cfg = GreenConfig {
        method: None,
        options: SolverOptions::default().with_convfactor(13),
    };
    let got = green_element(&h, &a, &b, &grid, &cfg).unwrap();
    let am = nalgebra::DVector::from_column_slice(&a);
    let bm = nalgebra::DVector::from_column_slice(&b);
    for (z, g) in grid.iter().zip(&got) {
        let gz = dense_resolvent(&dense(&h), *z).unwrap();
        let b_g_a = (bm.adjoint() * &gz * &am)[(0, 0)];
        assert!(rel_err(*g, b_g_a) < 1e-9);
    }
    // Real symmetric H with real vectors: a†Gb = b†Ga.
    let hr = random_real_symmetric(&mut r, 16);
    let ar = random_real_vector(&mut r, 16);
    let br = random_real_vector(&mut r, 16);
    let got = green_element(&hr, &ar, &br, &grid, &cfg).unwrap();
    let am = nalgebra::DVector::from_column_slice(&ar);
    let bm = nalgebra::DVector::from_column_slice(&br);
    for (z, g) in grid.iter().zip(&got) {
        let gz = dense_resolvent(&dense(&hr), *z).unwrap();
        let a_g_b = (am.adjoint() * &gz * &bm)[(0, 0)];
        assert!(rel_err(*g, a_g_b) < 1e-9);
    }
    // b = 0 gives zero.
    let zero = vec![c(0.0, 0.0); 16];
    let got = green_element(&h, &a, &zero, &grid, &cfg).unwrap();
    assert!(got.iter().all(|g| g.norm() < 1e-12));
}

#[test]
fn structure_factor_small_chain_peaks_and_sum_rule() {
    let p = SpinChainParams::heisenberg(8, 1.0).with_sector(0);
    let eta = 0.02;
    let omega: Vec<f64> = (0..4000).map(|i| -1.0 + 8.0 * i as f64 / 4000.0).collect();
    let cfg = GreenConfig {
        method: None,
        options: SolverOptions::default().with_convfactor(8).with_max_iter(5000),
    };
    let sf = structure_factor(&p, std::f64::consts::PI, &omega, eta, &cfg).unwrap();
    assert!(sf.values.iter().all(|&s| s >= -1e-10));
    let integral: f64 = sf.values.iter().sum::<f64>() * 8.0 / 4000.0;
    assert!((integral - sf.weight).abs() / sf.weight < 0.05, "{integral} vs {}", sf.weight);
}
