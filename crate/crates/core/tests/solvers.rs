mod common;

use common::*;
use num_complex::Complex64;
use shifted_krylov::linalg::{CountingOperator, LinearOperator, SparseMatrix};
use shifted_krylov::models::dense_shifted_solve;
use shifted_krylov::solvers::{
    drive, recalc, solve, Method, ProjectionSpec, SolverError, SolverOptions, SolverState, StepStatus,
};

fn opts(convfactor: i32) -> SolverOptions {
    SolverOptions::default().with_convfactor(convfactor).with_max_iter(2000)
}

#[test]
fn cg_finite_termination_on_two_levels() {
    let h = SparseMatrix::diagonal(&[1.0, 2.0]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let b = vec![c(s, 0.0), c(s, 0.0)];
    for method in [Method::CgReal, Method::CgComplex] {
        let out = solve(method, &h, &[c(3.0, 0.0)], &b, ProjectionSpec::Full, opts(10)).unwrap();
        assert_eq!(out.iterations, 2, "{method}");
        assert!(out.converged());
        let x = &out.solutions[0];
        assert!((x[0] - c(s / 2.0, 0.0)).norm() < 1e-14);
        assert!((x[1] - c(s, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn identity_operator_returns_rhs() {
    let h = SparseMatrix::identity(4);
    let mut r = rng(3);
    let b = random_vector(&mut r, 4);
    let out = solve(Method::Bicg, &h, &[c(2.0, 0.0)], &b, ProjectionSpec::Full, opts(12)).unwrap();
    assert!(vec_rel_err(&out.solutions[0], &b) < 1e-14);
}

#[test]
fn init_residuals_equal_rhs_norm() {
    let b = vec![c(3.0, 0.0), c(0.0, 4.0)];
    let st = SolverState::init(
        Method::Bicg,
        &[c(2.0, 0.1), c(3.0, 0.1)],
        b,
        ProjectionSpec::Full,
        SolverOptions::default(),
    )
    .unwrap();
    assert_eq!(st.get_residual(), vec![5.0, 5.0]);
    assert_eq!(st.shifts().collinearity(), &[c(1.0, 0.0), c(1.0, 0.0)]);
    let fin = st.finalize();
    assert_eq!(fin.iterations, 0);
    assert!(fin.solutions.iter().all(|y| y.iter().all(|z| z.norm() == 0.0)));
}

#[test]
fn init_errors() {
    let sh = [c(1.0, 0.0)];
    let p = ProjectionSpec::Full;
    let o = SolverOptions::default();
    let e = SolverState::init(Method::CgReal, &sh, vec![c(1.0, 1.0)], p.clone(), o).unwrap_err();
    assert!(matches!(e, SolverError::Incompatible { .. }));
    let e = SolverState::init(Method::CgReal, &[c(1.0, 0.1)], vec![c(1.0, 0.0)], p.clone(), o).unwrap_err();
    assert!(matches!(e, SolverError::Incompatible { .. }));
    let e = SolverState::init(Method::Bicg, &sh, vec![c(0.0, 0.0)], p.clone(), o).unwrap_err();
    assert_eq!(e, SolverError::ZeroRhs);
    let e = SolverState::init(Method::Bicg, &[], vec![c(1.0, 0.0)], p.clone(), o).unwrap_err();
    assert_eq!(e, SolverError::NoShifts);
    let e = SolverState::init(Method::Bicg, &sh, vec![c(1.0, 0.0)], p, o.with_threshold(0.0)).unwrap_err();
    assert!(matches!(e, SolverError::InvalidThreshold(_)));
}

#[test]
fn bicg_requires_shadow_product() {
    let mut st = SolverState::init(
        Method::Bicg,
        &[c(1.0, 0.1)],
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        ProjectionSpec::Full,
        SolverOptions::default(),
    )
    .unwrap();
    let mut q = vec![c(0.0, 0.0); 2];
    assert_eq!(st.update(&mut q, None).unwrap_err(), SolverError::MissingShadowProduct);
    let mut short = vec![c(0.0, 0.0); 1];
    assert!(matches!(st.update(&mut short, None), Err(SolverError::Dimension { .. })));
}

#[test]
fn shadow_start_falls_back_when_bt_b_vanishes() {
    // b = (1, i) has bᵀb = 0, so conj(b) would give ρ_0 = 0.
    let h = SparseMatrix::diagonal(&[1.0, 2.0]);
    let b = vec![c(1.0, 0.0), c(0.0, 1.0)];
    let out = solve(Method::Bicg, &h, &[c(0.5, 0.2)], &b, ProjectionSpec::Full, opts(12)).unwrap();
    assert!(out.converged());
    let x = dense_shifted_solve(&dense(&h), c(0.5, 0.2), &b).unwrap();
    assert!(vec_rel_err(&out.solutions[0], &x) < 1e-12);
}

#[test]
fn hermitian_shifts_match_dense_lu() {
    let mut r = rng(11);
    let h = random_hermitian(&mut r, 32);
    let b = random_vector(&mut r, 32);
    let shifts: Vec<Complex64> = (0..5).map(|k| c(k as f64, 0.05)).collect();
    let out = solve(Method::Bicg, &h, &shifts, &b, ProjectionSpec::Full, opts(10)).unwrap();
    assert!(out.converged());
    let hd = dense(&h);
    for (k, z) in shifts.iter().enumerate() {
        let x = dense_shifted_solve(&hd, *z, &b).unwrap();
        let res = shifted_krylov::solvers::relative_residual(&h, *z, &b, &out.solutions[k]);
        assert!(res * common::norm(&b) < 1e-9, "shift {k}: {res}");
        assert!(vec_rel_err(&out.solutions[k], &x) < 1e-6, "shift {k}");
    }
}

#[test]
fn cocg_and_general_bicg_match_dense_lu() {
    let mut r = rng(12);
    let hs = random_complex_symmetric(&mut r, 32);
    let hg = random_general(&mut r, 32);
    let b = random_vector(&mut r, 32);
    let shifts: Vec<Complex64> = (0..6).map(|k| c(-3.0 + k as f64, 0.5)).collect();
    for (method, h) in [(Method::Cocg, &hs), (Method::Bicg, &hg)] {
        let out = solve(method, h, &shifts, &b, ProjectionSpec::Full, opts(12)).unwrap();
        assert!(out.converged(), "{method}");
        let hd = dense(h);
        for (k, z) in shifts.iter().enumerate() {
            let x = dense_shifted_solve(&hd, *z, &b).unwrap();
            assert!(vec_rel_err(&out.solutions[k], &x) < 1e-8, "{method} shift {k}");
        }
    }
}

#[test]
fn spmv_count_independent_of_shift_count() {
    let mut r = rng(13);
    let h = CountingOperator::new(random_hermitian(&mut r, 32));
    let b = random_vector(&mut r, 32);
    let seed = c(1.0, 0.05);
    let run = |shifts: &[Complex64]| {
        h.reset();
        let out = solve(Method::Bicg, &h, shifts, &b, ProjectionSpec::bra(&b), opts(10)).unwrap();
        (h.calls(), out.iterations)
    };
    // Seed-only run versus a family whose members all converge no later than the seed.
    let single = run(&[seed]);
    let family: Vec<Complex64> = (0..5).map(|k| c(1.0 + 0.5 * k as f64, 0.05 + 0.2 * k as f64)).collect();
    let many = run(&family);
    assert_eq!(single.0, 2 * single.1);
    assert_eq!(many.0, 2 * many.1);
    assert_eq!(single, many);
}

#[test]
fn budget_exhaustion_is_not_an_error() {
    let mut r = rng(14);
    let h = random_hermitian(&mut r, 16);
    let b = random_vector(&mut r, 16);
    let out = solve(Method::Bicg, &h, &[c(0.0, 0.1)], &b, ProjectionSpec::Full, opts(12).with_max_iter(1)).unwrap();
    assert_eq!(out.status, StepStatus::BudgetExhausted);
    assert_eq!(out.history.len(), 1);
    assert_eq!(out.iterations, 1);
}

#[test]
fn log_length_equals_iterations() {
    let mut r = rng(15);
    let h = random_hermitian(&mut r, 16);
    let b = random_vector(&mut r, 16);
    let out = solve(Method::Bicg, &h, &[c(0.0, 0.1)], &b, ProjectionSpec::bra(&b), opts(10).with_log(true)).unwrap();
    assert_eq!(out.log.unwrap().len(), out.iterations);
}

#[test]
fn recalc_reproduces_and_interpolates() {
    let mut r = rng(16);
    let h = random_hermitian(&mut r, 32);
    let b = random_vector(&mut r, 32);
    let shifts: Vec<Complex64> = (0..5).map(|k| c(k as f64, 0.05)).collect();
    let out = solve(Method::Bicg, &h, &shifts, &b, ProjectionSpec::Full, opts(12).with_log(true)).unwrap();
    let log = out.log.as_ref().unwrap();
    let re = recalc(log, &shifts).unwrap();
    for k in 0..shifts.len() {
        assert_eq!(re.solutions[k].as_slice(), &out.solutions[k][..]);
    }
    let mid = c(2.5, 0.05);
    let re = recalc(log, &[mid]).unwrap();
    let x = dense_shifted_solve(&dense(&h), mid, &b).unwrap();
    assert!(vec_rel_err(&re.solutions[0], &x) < 1e-8);
    let far = recalc(log, &[c(1e3, 0.0)]).unwrap();
    assert!(far.solutions[0].iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    assert!(far.residuals[0].is_finite());
}

#[test]
fn recalc_rejects_empty_inputs() {
    let mut r = rng(17);
    let h = random_hermitian(&mut r, 8);
    let b = random_vector(&mut r, 8);
    let out = solve(Method::Bicg, &h, &[c(0.0, 0.5)], &b, ProjectionSpec::Full, opts(8).with_log(true)).unwrap();
    let log = out.log.unwrap();
    assert_eq!(recalc(&log, &[]).unwrap_err(), SolverError::NoShifts);
    let mut empty = log.clone();
    empty.records.clear();
    assert_eq!(recalc(&empty, &[c(0.0, 1.0)]).unwrap_err(), SolverError::EmptyLog);
}

#[test]
fn restart_matches_uninterrupted_run() {
    let mut r = rng(18);
    let h = random_hermitian(&mut r, 32);
    let b = random_vector(&mut r, 32);
    let shifts: Vec<Complex64> = (0..4).map(|k| c(-1.0 + k as f64, 0.1)).collect();
    let o = opts(11).with_log(true);
    let full = solve(Method::Bicg, &h, &shifts, &b, ProjectionSpec::Full, o).unwrap();

    let mut st = SolverState::init(Method::Bicg, &shifts, b.clone(), ProjectionSpec::Full, o).unwrap();
    let mut q = vec![c(0.0, 0.0); 32];
    let mut qs = vec![c(0.0, 0.0); 32];
    for _ in 0..10 {
        h.apply(st.residual(), &mut q);
        h.apply_adjoint(st.shadow_residual().unwrap(), &mut qs);
        st.update(&mut q, Some(&mut qs)).unwrap();
    }
    let cp = st.checkpoint();
    let log = st.log().unwrap().clone();
    let resumed = SolverState::restart(&shifts, ProjectionSpec::Full, o, cp, log).unwrap();
    let rest = drive(resumed, &h).unwrap();
    assert_eq!(rest.iterations, full.iterations);
    for k in 0..shifts.len() {
        assert!(vec_rel_err(&rest.solutions[k], &full.solutions[k]) < 1e-12);
    }
}
