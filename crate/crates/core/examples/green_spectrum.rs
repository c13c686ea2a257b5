//! Spectral function of a random vector on a 10-site Heisenberg ring, all
//! 400 frequencies from one Krylov run, checked against dense diagonalisation.
//!
//! ```text
//! cargo run --release --example green_spectrum
//! ```

use shifted_krylov::linalg::dot;
use shifted_krylov::models::{
    build_hamiltonian, dense_assemble, dense_eig, green_diagonal, GreenConfig, SpinChainParams,
};
use shifted_krylov::shiftk::random_vector;
use shifted_krylov::solvers::SolverOptions;
use shifted_krylov::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (h, basis) = build_hamiltonian(&SpinChainParams::heisenberg(10, 1.0).with_sector(0))?;
    let a = random_vector(basis.dim(), 7);
    let grid: Vec<Complex64> = (0..400)
        .map(|k| Complex64::new(-5.0 + 8.0 * k as f64 / 399.0, 0.05))
        .collect();

    let cfg = GreenConfig {
        method: None,
        options: SolverOptions::default().with_convfactor(10).with_max_iter(2000),
    };
    let spec = green_diagonal(&h, &a, &grid, &cfg)?;
    println!(
        "dimension {}, method {}, {} iterations, converged {}",
        basis.dim(),
        spec.method,
        spec.iterations,
        spec.converged
    );

    let eig = dense_eig(&dense_assemble(&h)?)?;
    let weights: Vec<f64> = (0..basis.dim())
        .map(|j| dot(&eig.vector(j), &a).norm_sqr())
        .collect();
    let mut worst: f64 = 0.0;
    for (z, g) in grid.iter().zip(&spec.values) {
        let exact: Complex64 = eig.values.iter().zip(&weights).map(|(l, w)| *w / (z - l)).sum();
        worst = worst.max((g - exact).norm() / exact.norm());
    }
    println!("largest relative deviation from the dense resolvent: {worst:.1e}");

    let a_w = spec.spectral_weight();
    println!("\n     omega        A(omega)");
    for k in (0..grid.len()).step_by(20) {
        println!("{:>10.3} {:>14.6}", grid[k].re, a_w[k]);
    }
    Ok(())
}
