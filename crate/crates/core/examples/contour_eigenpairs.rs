//! Interior eigenvalues of the 12-site Heisenberg ring (Sz = 0) inside the
//! circle |z + 5| < 0.8, for several source counts.
//!
//! ```text
//! cargo run --release --example contour_eigenpairs
//! ```

use shifted_krylov::contour::{contour_eigensolve, ContourConfig};
use shifted_krylov::models::{build_hamiltonian, SpinChainParams};
use shifted_krylov::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (h, basis) = build_hamiltonian(&SpinChainParams::heisenberg(12, 1.0).with_sector(0))?;
    println!("dimension {}", basis.dim());
    for n_l in [1, 2, 5] {
        let cfg = ContourConfig::new(Complex64::new(-5.0, 0.0), 0.8, 100, 10, n_l);
        let t = std::time::Instant::now();
        let res = contour_eigensolve(&h, &cfg)?;
        println!("SS(10,{n_l}): rank {} in {:.2?}", res.rank, t.elapsed());
        for p in &res.pairs {
            let flag = if p.near_boundary { "  (near contour)" } else { "" };
            println!("  {:>12.6}  residual {:.1e}{flag}", p.value, p.residual);
        }
    }
    Ok(())
}
