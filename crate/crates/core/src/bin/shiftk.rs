//! `shiftk <input>` computes a Green's function spectrum from a namelist file.
//! `shiftk contour <input> [flags]` lists eigenvalues inside a circle.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use shifted_krylov::shiftk::{self, namelist::parse_real, ContourArgs};
use shifted_krylov::Complex64;

#[derive(Parser)]
#[command(name = "shiftk", version, about = "Shifted Krylov Green's function and contour eigensolver driver")]
#[command(args_conflicts_with_subcommands = true, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Namelist input file.
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenpairs of the input's Hamiltonian inside the circle |z - gamma| < rho.
    Contour {
        input: PathBuf,
        /// Centre, as `re` or `re,im`.
        #[arg(long, default_value = "-5", value_parser = parse_complex, allow_hyphen_values = true)]
        gamma: Complex64,
        #[arg(long, default_value_t = 0.8)]
        rho: f64,
        #[arg(long, default_value_t = 100)]
        nz: usize,
        #[arg(long, default_value_t = 10)]
        nk: usize,
        #[arg(long, default_value_t = 5)]
        nl: usize,
        /// Relative singular-value cutoff.
        #[arg(long, default_value_t = 1e-3)]
        cutoff: f64,
        /// Seed of the random source vectors.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (re, im) = t.split_once(',').unwrap_or((t, "0"));
    match (parse_real(re), parse_real(im)) {
        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
        _ => Err(format!("expected re or re,im, got {s:?}")),
    }
}

fn fail(e: shiftk::RunError) -> ExitCode {
    eprintln!("shiftk: error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let workdir = PathBuf::from(".");
    match cli.command {
        Some(Command::Contour {
            input,
            gamma,
            rho,
            nz,
            nk,
            nl,
            cutoff,
            seed,
        }) => {
            let config = match shiftk::parse_input(&input) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            };
            let args = ContourArgs {
                gamma,
                rho,
                n_z: nz,
                n_k: nk,
                n_l: nl,
                cutoff,
                seed,
            };
            match shiftk::run_contour(&config, &args, &workdir) {
                Ok(res) => {
                    print!("{}", shiftk::format_contour(&res));
                    if res.has_boundary_warning() {
                        eprintln!("shiftk: warning: eigenvalues within 5% of the radius from the contour are less accurate");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        None => {
            let Some(input) = cli.input else {
                eprintln!("shiftk: error: missing input file");
                return ExitCode::from(1);
            };
            let config = match shiftk::parse_input(&input) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            };
            match shiftk::run(&config, &workdir) {
                Ok(report) => {
                    if let Some(seed) = report.random_seed {
                        println!("random initial vector, rndseed = {seed}");
                    }
                    if let Some(m) = report.method {
                        println!("method {m}, dimension {}", report.dim);
                    }
                    println!(
                        "{} iterations, {} matrix-vector products",
                        report.iterations, report.spmv_calls
                    );
                    if !report.converged() {
                        eprintln!(
                            "shiftk: warning: {} of {} frequencies not converged",
                            report.unconverged.len(),
                            report.frequencies.len()
                        );
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
