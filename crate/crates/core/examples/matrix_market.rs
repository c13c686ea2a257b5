//! File-based workflow: a Hamiltonian and a start vector in Matrix Market
//! format, a namelist input, a normal run and a recalc on a finer grid. This
//! is what `shiftk namelist.def` does in a directory holding these files.
//!
//! ```text
//! cargo run --release --example matrix_market
//! ```

use shifted_krylov::linalg::market;
use shifted_krylov::models::{build_hamiltonian, SpinChainParams};
use shifted_krylov::shiftk::{self, files, parse_str, OUTPUT_DIR, RESIDUAL_FILE};

fn input(calctype: &str, nomega: usize) -> String {
    format!(
        "&filename
  inham = \"Ham.dat\"
  invec = \"Excited.dat\"
/
&cg
  maxloops = 500
  convfactor = 8
/
&dyn
  calctype = \"{calctype}\"
  nomega = {nomega}
  omegamin = (-6.0d0, 0.05d0)
  omegamax = (2.0d0, 0.05d0)
/
"
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let work = dir.path();

    let (h, basis) = build_hamiltonian(&SpinChainParams::heisenberg(10, 1.0).with_sector(0))?;
    market::write_matrix(&h, work.join("Ham.dat"))?;
    market::write_vector(&shiftk::random_vector(basis.dim(), 42), work.join("Excited.dat"))?;
    let back = market::read(work.join("Ham.dat"))?.into_matrix()?;
    println!("Ham.dat: {} x {}, {} stored entries", back.dim(), back.dim(), back.nnz());

    let normal = shiftk::run(&parse_str(&input("normal", 81))?, work)?;
    println!(
        "normal: {} iterations, {} products, converged {}",
        normal.iterations,
        normal.spmv_calls,
        normal.converged()
    );
    let residuals = std::fs::read_to_string(work.join(RESIDUAL_FILE))?;
    println!("residual.dat has {} lines", residuals.lines().count());

    let recalc = shiftk::run(&parse_str(&input("recalc", 801))?, work)?;
    println!("recalc: {} frequencies, {} products", recalc.values.len(), recalc.spmv_calls);

    let table = files::read_dynamical_g(&work.join(OUTPUT_DIR).join(shiftk::GREEN_FILE))?;
    println!("\n     omega        Re G          Im G");
    for (z, g) in table.iter().step_by(80) {
        println!("{:>10.3} {:>12.6} {:>12.6}", z.re, g.re, g.im);
    }
    Ok(())
}
