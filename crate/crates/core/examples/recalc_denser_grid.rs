//! Runs once on a coarse grid with the coefficient log switched on, then
//! evaluates the same Green's function on a grid ten times denser by
//! replaying the log. The replay never touches the Hamiltonian.
//!
//! ```text
//! cargo run --release --example recalc_denser_grid
//! ```

use shifted_krylov::linalg::CountingOperator;
use shifted_krylov::models::{build_hamiltonian, SpinChainParams};
use shifted_krylov::shiftk::random_vector;
use shifted_krylov::solvers::{recalc, solve, Method, ProjectionSpec, SolverOptions};
use shifted_krylov::Complex64;

fn grid(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::new(-5.0 + 8.0 * k as f64 / (n - 1) as f64, 0.05))
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (h, basis) = build_hamiltonian(&SpinChainParams::heisenberg(12, 1.0).with_sector(0))?;
    let op = CountingOperator::new(&h);
    let b = random_vector(basis.dim(), 1);

    let coarse = grid(41);
    let options = SolverOptions::default().with_convfactor(10).with_max_iter(2000).with_log(true);
    let run = solve(Method::Bicg, &op, &coarse, &b, ProjectionSpec::bra(&b), options)?;
    let log = run.log.expect("logging was requested");
    println!(
        "solve: {} shifts, {} iterations, {} products, {} log records",
        coarse.len(),
        run.iterations,
        op.calls(),
        log.len()
    );

    op.reset();
    let fine = grid(401);
    let re = recalc(&log, &fine)?;
    println!(
        "recalc: {} shifts, {} products, {} of them converged",
        fine.len(),
        op.calls(),
        re.converged.iter().filter(|&&c| c).count()
    );

    // Every tenth fine point is a coarse point; the values agree exactly.
    let diff = coarse
        .iter()
        .enumerate()
        .map(|(k, _)| (re.solutions[10 * k][0] - run.solutions[k][0]).norm())
        .fold(0.0, f64::max);
    println!("largest difference on shared frequencies: {diff:.1e}");
    Ok(())
}
