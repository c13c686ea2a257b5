//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! status 1 if any criterion fails.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use shifted_krylov::contour::{contour_eigensolve, ContourConfig};
use shifted_krylov::linalg::{dot, dot_unconjugated, norm2, CountingOperator, LinearOperator, SparseMatrix};
use shifted_krylov::models::{
    build_hamiltonian, dense_assemble, dense_eig, dense_shifted_solve, green_diagonal, structure_factor, szq_vector,
    GreenConfig, SpinChainParams,
};
use shifted_krylov::shiftk;
use shifted_krylov::solvers::{self, Method, ProjectionSpec, SolverOptions, SolverState, StepStatus};

// Allocation tracking, active only on the thread that switches it on.
thread_local! {
    static TARGET: Cell<usize> = const { Cell::new(0) };
    static LIVE: Cell<usize> = const { Cell::new(0) };
    static PEAK: Cell<usize> = const { Cell::new(0) };
    static LARGEST: Cell<usize> = const { Cell::new(0) };
}

struct Tracking;

fn on_alloc(size: usize) {
    let _ = TARGET.try_with(|t| {
        let target = t.get();
        if target == 0 {
            return;
        }
        LARGEST.with(|l| l.set(l.get().max(size)));
        if size == target {
            LIVE.with(|l| {
                l.set(l.get() + 1);
                PEAK.with(|p| p.set(p.get().max(l.get())));
            });
        }
    });
}

fn on_dealloc(size: usize) {
    let _ = TARGET.try_with(|t| {
        if t.get() != 0 && size == t.get() {
            LIVE.with(|l| l.set(l.get().saturating_sub(1)));
        }
    });
}

unsafe impl GlobalAlloc for Tracking {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        on_alloc(layout.size());
        unsafe { System.alloc(layout) }
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        on_dealloc(layout.size());
        unsafe { System.dealloc(ptr, layout) }
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        on_dealloc(layout.size());
        on_alloc(new_size);
        unsafe { System.realloc(ptr, layout, new_size) }
    }
}

#[global_allocator]
static GLOBAL: Tracking = Tracking;

/// Counts live allocations of exactly `bytes` while `f` runs; returns
/// `(peak live count, largest single allocation)`.
fn track<R>(bytes: usize, f: impl FnOnce() -> R) -> (R, usize, usize) {
    LIVE.with(|l| l.set(0));
    PEAK.with(|p| p.set(0));
    LARGEST.with(|l| l.set(0));
    TARGET.with(|t| t.set(bytes));
    let r = f();
    TARGET.with(|t| t.set(0));
    (r, PEAK.with(Cell::get), LARGEST.with(Cell::get))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const TABLE: [f64; 7] = [-5.387391, -5.031543, -4.777389, -4.569374, -4.569374, -4.297689, -4.297689];

fn heisenberg12() -> (SparseMatrix, shifted_krylov::models::SectorBasis) {
    build_hamiltonian(&SpinChainParams::heisenberg(12, 1.0).with_sector(0)).unwrap()
}

fn matches_table(vals: &[f64], expect: &[f64], tol: f64) -> bool {
    vals.len() == expect.len() && vals.iter().zip(expect).all(|(a, b)| (a - b).abs() <= tol)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (h, basis) = heisenberg12();
    let mut lines = Vec::new();
    let mut pass = basis.dim() == 924;
    let mut run = |n_l: usize| {
        let cfg = ContourConfig::new(c(-5.0, 0.0), 0.8, 100, 10, n_l);
        let res = contour_eigensolve(&h, &cfg).unwrap();
        let vals = res.eigenvalues();
        lines.push(format!("SS(10,{n_l}) -> {:?}", vals.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>()));
        vals
    };
    let v5 = run(5);
    let v2 = run(2);
    let v1 = run(1);
    pass &= matches_table(&v5, &TABLE, 1e-5);
    pass &= matches_table(&v2, &TABLE, 1e-5);
    let first_four_found = TABLE[..4].iter().all(|t| v1.iter().any(|v| (v - t).abs() <= 1e-5));
    let all_match_table = v1.iter().all(|v| TABLE.iter().any(|t| (v - t).abs() <= 1e-5));
    let count = |t: f64| v1.iter().filter(|v| (*v - t).abs() <= 1e-5).count();
    let misses_pair_member = count(TABLE[3]) < 2 || count(TABLE[5]) < 2;
    pass &= first_four_found && all_match_table && misses_pair_member;
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    outcome(pass, format!("{}; {:.1?}", lines.join("; "), elapsed))
}

fn green_run(method: Method, h: &SparseMatrix, a: &[Complex64], grid: &[Complex64]) -> shifted_krylov::models::SpectrumResult {
    let cfg = GreenConfig {
        method: Some(method),
        options: SolverOptions::default().with_convfactor(12).with_max_iter(10_000),
    };
    green_diagonal(h, a, grid, &cfg).unwrap()
}

/// Runs of criterion 2, reused by criterion 8.
fn criterion_2_runs() -> Vec<(String, f64, f64)> {
    let mut r = rng(2);
    let mut out = Vec::new();

    let h = random_hermitian(&mut r, 64);
    let a = random_vector(&mut r, 64);
    let eig = dense_eig(&dense(&h)).unwrap();
    let (lo, hi) = (eig.values[0] - 0.5, eig.values[63] + 0.5);
    let grid: Vec<Complex64> = (0..200).map(|k| c(lo + (hi - lo) * k as f64 / 199.0, 0.1)).collect();
    let weights: Vec<f64> = (0..64).map(|j| dot(&eig.vector(j), &a).norm_sqr()).collect();
    let res = green_run(Method::Bicg, &h, &a, &grid);
    let err = grid
        .iter()
        .zip(&res.values)
        .map(|(z, g)| {
            let oracle: Complex64 = eig.values.iter().zip(&weights).map(|(l, w)| *w / (z - l)).sum();
            rel_err(*g, oracle)
        })
        .fold(0.0, f64::max);
    let disc = solvers::solve(Method::Bicg, &h, &grid, &a, ProjectionSpec::bra(&a), SolverOptions::default().with_convfactor(12).with_max_iter(10_000))
        .unwrap()
        .max_switch_discontinuity;
    out.push(("hermitian64/bicg".to_string(), err, disc));

    for (label, method, h) in [
        ("complex-symmetric32/cocg", Method::Cocg, random_complex_symmetric(&mut r, 32)),
        ("general32/bicg", Method::Bicg, random_general(&mut r, 32)),
    ] {
        let a = random_vector(&mut r, 32);
        let grid: Vec<Complex64> = (0..200).map(|k| c(-6.0 + 12.0 * k as f64 / 199.0, 0.1)).collect();
        let res = green_run(method, &h, &a, &grid);
        let hd = dense(&h);
        let err = grid
            .iter()
            .zip(&res.values)
            .map(|(z, g)| {
                let x = dense_shifted_solve(&hd, *z, &a).unwrap();
                rel_err(*g, dot(&a, &x))
            })
            .fold(0.0, f64::max);
        let opts = SolverOptions::default().with_convfactor(12).with_max_iter(10_000);
        let disc = solvers::solve(method, &h, &grid, &a, ProjectionSpec::bra(&a), opts)
            .unwrap()
            .max_switch_discontinuity;
        out.push((label.to_string(), err, disc));
    }
    out
}

fn criterion_2(runs: &[(String, f64, f64)]) -> Outcome {
    let pass = runs.iter().all(|(_, e, _)| *e <= 1e-8);
    let detail = runs.iter().map(|(l, e, _)| format!("{l} max rel err {e:.2e}")).collect::<Vec<_>>().join("; ");
    outcome(pass, detail + " (tol 1e-8)")
}

/// SpMV count and peak full-length allocations of one reverse-communication run.
fn counted_run(method: Method, h: &SparseMatrix, shifts: &[Complex64], b: &[Complex64]) -> (usize, usize, usize, usize) {
    let dim = h.dim();
    let op = CountingOperator::new(h);
    let opts = SolverOptions::default().with_convfactor(10).with_max_iter(5000);
    let projection = ProjectionSpec::bra(b);
    let ((iterations, status), peak, largest) = track(dim * std::mem::size_of::<Complex64>(), || {
        let mut state = SolverState::init(method, shifts, b.to_vec(), projection, opts).unwrap();
        let mut q = vec![c(0.0, 0.0); dim];
        let mut qs = (method == Method::Bicg).then(|| vec![c(0.0, 0.0); dim]);
        let status = loop {
            op.apply(state.residual(), &mut q);
            if let (Some(qs), Some(rs)) = (qs.as_mut(), state.shadow_residual()) {
                op.apply_adjoint(rs, qs);
            }
            let out = state.update(&mut q, qs.as_deref_mut()).unwrap();
            if out.status != StepStatus::Iterating {
                break out.status;
            }
        };
        let fin = state.finalize();
        (fin.iterations, status)
    });
    assert_eq!(status, StepStatus::Converged);
    (op.calls(), iterations, peak, largest)
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let n = 256;
    let herm = random_hermitian(&mut r, n);
    let csym = random_complex_symmetric(&mut r, n);
    let gen = random_general(&mut r, n);
    let b = random_vector(&mut r, n);
    // The first shift is the slowest; every larger family contains it.
    let family = |base: Complex64, step: Complex64, count: usize| -> Vec<Complex64> {
        (0..count).map(|k| base + step * k as f64).collect()
    };
    let cases = [
        ("cg_c", Method::CgComplex, &herm, c(30.0, 0.0), c(0.25, 0.0), 1usize),
        ("cocg", Method::Cocg, &csym, c(0.0, 30.0), c(0.0, 0.25), 1),
        ("bicg", Method::Bicg, &gen, c(0.0, 30.0), c(0.0, 0.25), 2),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, method, h, base, step, per_iter) in cases {
        let mut counts = Vec::new();
        for n_eq in [1, 10, 100] {
            let (calls, iters, peak, largest) = counted_run(method, h, &family(base, step, n_eq), &b);
            let expected_peak = 3 * per_iter;
            pass &= calls == per_iter * iters;
            pass &= peak == expected_peak;
            pass &= largest < n * n_eq.max(2) * 16;
            counts.push(format!("N_eq={n_eq}: {calls} SpMV/{iters} it, peak {peak} vectors"));
        }
        let first: Vec<&str> = counts.iter().map(|s| s.split(':').nth(1).unwrap()).collect();
        pass &= first.windows(2).all(|w| w[0] == w[1]);
        details.push(format!("{name} [{}]", counts.join(", ")));
    }
    outcome(pass, details.join("; "))
}

/// Sine of the angle between two vectors, from the orthogonal component.
fn sine_between(a: &[Complex64], b: &[Complex64]) -> f64 {
    let coef = dot(a, b) / dot(a, a).re;
    let perp: Vec<Complex64> = a.iter().zip(b).map(|(ai, bi)| bi - coef * ai).collect();
    norm2(&perp) / norm2(b)
}

/// Below this relative residual the explicitly computed residual is dominated
/// by rounding, `|b - (zI - H)x| ~ eps |H| |x|`, and its direction says nothing
/// about the recurrence. Pairs under it are held to the scaled bound instead.
const GAP_FLOOR: f64 = 1e-3;

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut worst_sine: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut worst_floor: f64 = 0.0;
    let mut checked = 0usize;
    let mut total = 0usize;
    let cases = [
        (Method::Bicg, random_hermitian(&mut r, 32)),
        (Method::Cocg, random_complex_symmetric(&mut r, 32)),
        (Method::Bicg, random_general(&mut r, 32)),
    ];
    for (method, h) in &cases {
        let b = random_vector(&mut r, 32);
        let shifts: Vec<Complex64> = (0..5).map(|k| c(-2.0 + k as f64, 0.5)).collect();
        let opts = SolverOptions::default().with_convfactor(8).with_max_iter(500);
        let mut st = SolverState::init(*method, &shifts, b.clone(), ProjectionSpec::Full, opts).unwrap();
        let mut q = vec![c(0.0, 0.0); 32];
        let mut qs = vec![c(0.0, 0.0); 32];
        loop {
            h.apply(st.residual(), &mut q);
            if let Some(rs) = st.shadow_residual() {
                h.apply_adjoint(rs, &mut qs);
            }
            let shadow = (*method == Method::Bicg).then_some(&mut qs[..]);
            let out = st.update(&mut q, shadow).unwrap();
            let seed = st.residual().to_vec();
            let reported = st.get_residual();
            for (k, z) in shifts.iter().enumerate() {
                if st.shifts().is_frozen(k) {
                    continue;
                }
                let x = st.projected_solution(k);
                let mut hx = vec![c(0.0, 0.0); 32];
                h.apply(x, &mut hx);
                let explicit: Vec<Complex64> = b.iter().zip(x).zip(&hx).map(|((bi, xi), hi)| bi - (z * xi - hi)).collect();
                let sine = sine_between(&seed, &explicit);
                let rel = norm2(&explicit) / norm2(&b);
                let gap = (reported[k] - norm2(&explicit)).abs() / norm2(&explicit);
                worst_floor = worst_floor.max(sine * rel).max(gap * rel);
                if rel >= GAP_FLOOR {
                    worst_sine = worst_sine.max(sine);
                    worst_norm = worst_norm.max(gap);
                    checked += 1;
                }
                total += 1;
            }
            if out.status != StepStatus::Iterating {
                break;
            }
        }
    }
    let pass = worst_sine <= 1e-10 && worst_norm <= 1e-10 && worst_floor <= 1e-12;
    outcome(
        pass,
        format!(
            "{checked} of {total} (iteration, shift) pairs with |r|/|b| >= {GAP_FLOOR:.0e}: max sine {worst_sine:.2e}, \
             max relative norm gap {worst_norm:.2e} (tol 1e-10); all pairs: max (sine or gap) * |r|/|b| = {worst_floor:.2e} (tol 1e-12)"
        ),
    )
}

fn criterion_5() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(5);
    let (h, _) = build_hamiltonian(&SpinChainParams::heisenberg(10, 1.0).with_sector(0)).unwrap();
    let v = random_real_vector(&mut r, h.dim());
    shifted_krylov::linalg::market::write_matrix(&h, dir.path().join("Ham.dat")).unwrap();
    shifted_krylov::linalg::market::write_vector(&v, dir.path().join("Excited.dat")).unwrap();
    let input = |calctype: &str, nomega: usize| {
        format!(
            "&filename\n inham = \"Ham.dat\"\n invec = \"Excited.dat\"\n/\n&cg\n maxloops = 1000\n convfactor = 10\n/\n\
             &dyn\n calctype = \"{calctype}\"\n nomega = {nomega}\n omegamin = (-5d0, 0.05d0)\n omegamax = (3d0, 0.05d0)\n/\n"
        )
    };
    let normal = shiftk::run(&shiftk::parse_str(&input("normal", 100)).unwrap(), dir.path()).unwrap();
    let re = shiftk::run(&shiftk::parse_str(&input("recalc", 800)).unwrap(), dir.path()).unwrap();
    let err = normal
        .values
        .iter()
        .enumerate()
        .map(|(k, g)| rel_err(re.values[8 * k], *g))
        .fold(0.0, f64::max);
    // Library-level replay from the files: no operator is involved at all.
    let log = shiftk::files::read_log(
        &dir.path().join("output/TriDiagComp.dat"),
        &dir.path().join("output/ResVec.dat"),
    )
    .unwrap();
    let lib = solvers::recalc(&log, &re.frequencies).unwrap();
    let lib_err = lib
        .solutions
        .iter()
        .zip(&re.values)
        .map(|(y, g)| rel_err(y[0], *g))
        .fold(0.0, f64::max);
    let pass = err <= 1e-12 && lib_err <= 1e-12 && re.spmv_calls == 0 && normal.converged();
    outcome(
        pass,
        format!(
            "{} shared frequencies, max rel diff {err:.2e}, library replay vs CLI {lib_err:.2e} (tol 1e-12); recalc SpMV calls {}",
            normal.values.len(),
            re.spmv_calls
        ),
    )
}

fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let eta = 0.02;
    let params = SpinChainParams::heisenberg(12, 1.0).with_sector(0);
    let (h, basis) = build_hamiltonian(&params).unwrap();
    let eig = dense_eig(&dense_assemble(&h).unwrap()).unwrap();
    let e0 = eig.values[0];
    // The window [-5.5, 0) of absolute energies, 1000 points, as excitation energies.
    let absolute: Vec<f64> = (0..1000).map(|i| -5.5 + 5.5 * i as f64 / 1000.0).collect();
    let omega: Vec<f64> = absolute.iter().map(|w| w - e0).collect();
    let cfg = GreenConfig {
        method: None,
        options: SolverOptions::default().with_convfactor(6).with_max_iter(1000),
    };
    let t = Instant::now();
    let sf = structure_factor(&params, std::f64::consts::PI, &omega, eta, &cfg).unwrap();
    let solve_time = t.elapsed();

    let b = szq_vector(&basis, &eig.vector(0), std::f64::consts::PI).unwrap();
    let lines: Vec<(f64, f64)> = (0..basis.dim())
        .map(|j| (eig.values[j] - e0, dot(&eig.vector(j), &b).norm_sqr()))
        .filter(|&(_, w)| w > 1e-8)
        .collect();
    let smax = sf.values.iter().copied().fold(0.0, f64::max);
    let peaks: Vec<f64> = local_maxima(&sf.values)
        .into_iter()
        .filter(|&i| sf.values[i] > 0.01 * smax)
        .map(|i| sf.omega[i])
        .collect();
    let peaks_on_lines = peaks.iter().all(|p| lines.iter().any(|(l, _)| (p - l).abs() <= eta));
    let (wlo, whi) = (omega[0], omega[omega.len() - 1]);
    let strong: Vec<f64> = lines
        .iter()
        .filter(|(l, w)| *w > 0.01 * sf.weight && *l > wlo + eta && *l < whi - eta)
        .map(|(l, _)| *l)
        .collect();
    let lines_have_peaks = strong.iter().all(|l| peaks.iter().any(|p| (p - l).abs() <= eta));
    let nonneg = sf.values.iter().all(|&s| s >= -1e-10);
    let e0_ok = (e0 - (-5.387391)).abs() <= 1e-6;
    let elapsed = start.elapsed();
    let pass = peaks_on_lines && lines_have_peaks && nonneg && e0_ok && sf.spectrum.converged && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "E0 = {e0:.7}; {} peaks, all within eta of a line: {peaks_on_lines}; {} strong lines each with a peak: {lines_have_peaks}; min S {:.1e}; {} iterations; solve {solve_time:.1?}, total {elapsed:.1?}",
            peaks.len(),
            strong.len(),
            sf.values.iter().copied().fold(f64::INFINITY, f64::min),
            sf.spectrum.iterations,
        ),
    )
}

/// Seed residuals `r_0..r_n` (and shadows for BiCG) of a single-shift run.
fn residual_sequence(method: Method, h: &SparseMatrix, z: Complex64, b: &[Complex64], steps: usize) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let n = h.dim();
    let opts = SolverOptions::default().with_threshold(1e-300).with_max_iter(steps);
    let mut st = SolverState::init(method, &[z], b.to_vec(), ProjectionSpec::Full, opts).unwrap();
    let mut rs = vec![st.residual().to_vec()];
    let mut shadows: Vec<Vec<Complex64>> = st.shadow_residual().map(|s| vec![s.to_vec()]).unwrap_or_default();
    let mut q = vec![c(0.0, 0.0); n];
    let mut qs = vec![c(0.0, 0.0); n];
    for _ in 0..steps {
        h.apply(st.residual(), &mut q);
        if let Some(s) = st.shadow_residual() {
            h.apply_adjoint(s, &mut qs);
        }
        let shadow = (method == Method::Bicg).then_some(&mut qs[..]);
        let out = st.update(&mut q, shadow).unwrap();
        rs.push(st.residual().to_vec());
        if let Some(s) = st.shadow_residual() {
            shadows.push(s.to_vec());
        }
        if out.status != StepStatus::Iterating {
            break;
        }
    }
    (rs, shadows)
}

fn max_cross(left: &[Vec<Complex64>], right: &[Vec<Complex64>], inner: fn(&[Complex64], &[Complex64]) -> Complex64) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if i != j {
                worst = worst.max(inner(a, b).norm() / (norm2(a) * norm2(b)));
            }
        }
    }
    worst
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let n = 64;
    let herm = random_hermitian(&mut r, n);
    let real = random_real_symmetric(&mut r, n);
    let csym = random_complex_symmetric(&mut r, n);
    let gen = random_general(&mut r, n);
    let b = random_vector(&mut r, n);
    let breal = random_real_vector(&mut r, n);
    // HPD seed matrices zI - H for CG: z above the spectrum.
    let top = |h: &SparseMatrix| dense_eig(&dense(h)).unwrap().values[n - 1];
    let (cg_r, _) = residual_sequence(Method::CgReal, &real, c(top(&real) + 2.0, 0.0), &breal, 30);
    let (cg_c, _) = residual_sequence(Method::CgComplex, &herm, c(top(&herm) + 2.0, 0.0), &b, 30);
    let (cocg, _) = residual_sequence(Method::Cocg, &csym, c(0.5, 8.0), &b, 30);
    let (bicg, shadow) = residual_sequence(Method::Bicg, &gen, c(0.5, 8.0), &b, 30);
    let results = [
        ("cg_r r_i.r_j", max_cross(&cg_r, &cg_r, dot)),
        ("cg_c r_i^H r_j", max_cross(&cg_c, &cg_c, dot)),
        ("cocg r_i^T r_j", max_cross(&cocg, &cocg, dot_unconjugated)),
        ("bicg s_i^H r_j", max_cross(&shadow, &bicg, dot)),
    ];
    let lens = [cg_r.len(), cg_c.len(), cocg.len(), bicg.len()].map(|l| l - 1);
    let pass = results.iter().all(|(_, v)| *v <= 1e-8) && lens.iter().all(|&l| l == 30);
    outcome(
        pass,
        format!(
            "{} over {lens:?} iterations (tol 1e-8)",
            results.iter().map(|(l, v)| format!("{l} {v:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn criterion_8(runs: &[(String, f64, f64)]) -> Outcome {
    let pass = runs.iter().all(|(_, _, d)| *d <= 1e-12);
    outcome(
        pass,
        runs.iter().map(|(l, _, d)| format!("{l} max jump {d:.2e}")).collect::<Vec<_>>().join("; ") + " (tol 1e-12)",
    )
}

type Criterion<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

fn main() {
    let runs = criterion_2_runs();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 eigenvalue table via contour integral", Box::new(criterion_1)),
        ("2 resolvent vs dense oracles", Box::new(|| criterion_2(&runs))),
        ("3 SpMV count and vector memory independent of N_eq", Box::new(criterion_3)),
        ("4 collinear residuals", Box::new(criterion_4)),
        ("5 recalc equivalence", Box::new(criterion_5)),
        ("6 structure factor peaks", Box::new(criterion_6)),
        ("7 residual orthogonality", Box::new(criterion_7)),
        ("8 seed-switch continuity", Box::new(|| criterion_8(&runs))),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {tag} | {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
