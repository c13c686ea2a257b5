//! Off-diagonal element b† G(z) a from four diagonal runs, compared with a
//! dense LU solve.
//!
//! ```text
//! cargo run --release --example offdiagonal_green
//! ```

use shifted_krylov::linalg::dot;
use shifted_krylov::models::{
    build_hamiltonian, dense_assemble, dense_shifted_solve, green_element, GreenConfig, SpinChainParams,
};
use shifted_krylov::shiftk::random_vector;
use shifted_krylov::solvers::SolverOptions;
use shifted_krylov::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Anisotropic chain with a Dzyaloshinskii-Moriya term, so H is complex Hermitian.
    let params = SpinChainParams {
        nsite: 8,
        jx: 1.0,
        jy: 1.0,
        jz: 0.7,
        dz: 0.3,
        two_sz: Some(0),
    };
    let (h, basis) = build_hamiltonian(&params)?;
    let a = random_vector(basis.dim(), 3);
    let b = random_vector(basis.dim(), 4);
    let grid: Vec<Complex64> = (0..9).map(|k| Complex64::new(-3.0 + 0.75 * k as f64, 0.1)).collect();

    let cfg = GreenConfig {
        method: None,
        options: SolverOptions::default().with_convfactor(12).with_max_iter(1000),
    };
    let g_ba = green_element(&h, &a, &b, &grid, &cfg)?;

    let dense = dense_assemble(&h)?;
    println!("        z                 b† G(z) a                 |error|");
    for (z, g) in grid.iter().zip(&g_ba) {
        let exact = dot(&b, &dense_shifted_solve(&dense, *z, &a)?);
        println!("{z:>12.2}   {g:>32.10}   {:.1e}", (g - exact).norm());
    }
    Ok(())
}
