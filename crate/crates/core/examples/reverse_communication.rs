//! Drives the solver by hand. The Hamiltonian is never stored: it is a
//! nearest-neighbour hopping ring applied inside the loop, so the solver only
//! ever sees the product vectors it asks for.
//!
//! ```text
//! cargo run --release --example reverse_communication
//! ```

use shifted_krylov::solvers::{Method, ProjectionSpec, SolverOptions, SolverState, StepStatus};
use shifted_krylov::Complex64;

const SITES: usize = 400;

/// `y = H x` for `H = -Σ (c†_i c_{i+1} + h.c.)` on a ring with a small staggered potential.
fn hop(x: &[Complex64], y: &mut [Complex64]) {
    let n = x.len();
    for i in 0..n {
        let stagger = if i % 2 == 0 { 0.3 } else { -0.3 };
        y[i] = stagger * x[i] - x[(i + 1) % n] - x[(i + n - 1) % n];
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut b = vec![Complex64::new(0.0, 0.0); SITES];
    b[0] = Complex64::new(1.0, 0.0);
    // Local density of states at site 0: G_00(ω + iη).
    let shifts: Vec<Complex64> = (0..60)
        .map(|k| Complex64::new(-3.0 + 0.1 * k as f64, 0.05))
        .collect();
    let options = SolverOptions::default().with_convfactor(10).with_max_iter(5000);
    let mut state = SolverState::init(Method::Cocg, &shifts, b.clone(), ProjectionSpec::bra(&b), options)?;

    // H is real symmetric, so zI - H is complex symmetric and COCG needs one product per step.
    let mut q = vec![Complex64::new(0.0, 0.0); SITES];
    let mut products = 0;
    let mut moves = 0;
    loop {
        hop(state.residual(), &mut q);
        products += 1;
        let out = state.update(&mut q, None)?;
        if out.switch.is_some_and(|s| s.changed_seed()) {
            moves += 1;
        }
        if out.iteration % 100 == 0 {
            println!(
                "iteration {:>4}: max residual {:.2e}, seed z = {:.2}",
                out.iteration,
                out.max_residual,
                shifts[out.seed_index]
            );
        }
        if out.status != StepStatus::Iterating {
            println!(
                "{:?} after {} iterations, {products} products, seed moved {moves} times",
                out.status, out.iteration
            );
            break;
        }
    }

    let fin = state.finalize();
    println!("\n     omega      -Im G/pi");
    for (z, y) in shifts.iter().zip(&fin.solutions).step_by(5) {
        println!("{:>10.2} {:>13.5}", z.re, -y[0].im / std::f64::consts::PI);
    }
    Ok(())
}
