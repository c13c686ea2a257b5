//! Text formats of the output directory.
//!
//! All reals are written with 17 significant digits so every file reads back
//! to the identical double.
//!
//! `TriDiagComp.dat`:
//! ```text
//! # shiftk coefficient log
//! dim <M>
//! m_left <M_left>
//! n_eq <N_eq>
//! z_initial <re> <im>
//! threshold <t>
//! iterations <n>
//! seeds <count>
//! <iteration> <re> <im>          (one line per seed in effect)
//! # n z_seed alpha beta_prev alpha_prev rho |r| switch
//! <n> <12 reals> <|r|> -          (no rescaling)
//! <n> <12 reals> <|r|> <from> <to> <z re im> <pi_new re im> <pi_old re im>
//! ```
//!
//! `ResVec.dat`: header `<M_left> <iterations>`, then one line per iteration
//! holding `n` followed by `M_left` complex pairs of `P r_n`.
//!
//! `RestartVec.dat`: method, iteration, seed scalars, then the seed residual
//! vectors `r_n`, `r_{n-1}` (and the shadow pair for BiCG), one complex per line.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;

use super::RunError;
use crate::solvers::{CoefficientLog, IterationRecord, Method, SeedCheckpoint, SeedSwitch};

fn fmt_c(out: &mut String, z: Complex64) {
    let _ = write!(out, " {:.16e} {:.16e}", z.re, z.im);
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, RunError> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| RunError::io(path, e))
}

fn finish(path: &Path, mut w: impl Write, text: &str) -> Result<(), RunError> {
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| RunError::io(path, e))
}

fn corrupt(path: &Path, line: usize, msg: impl std::fmt::Display) -> RunError {
    RunError::Format {
        path: path.to_path_buf(),
        message: format!("line {line}: {msg}"),
    }
}

/// Reads the data lines of a file, skipping `#` comments and blank lines.
fn data_lines(path: &Path) -> Result<Vec<(usize, String)>, RunError> {
    let f = std::fs::File::open(path).map_err(|e| RunError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| RunError::io(path, e))?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push((i + 1, t.to_string()));
        }
    }
    Ok(out)
}

struct Fields<'a> {
    path: &'a Path,
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn new(path: &'a Path, line: usize, text: &'a str) -> Self {
        Self {
            path,
            line,
            it: text.split_whitespace(),
        }
    }

    fn word(&mut self) -> Result<&'a str, RunError> {
        self.it
            .next()
            .ok_or_else(|| corrupt(self.path, self.line, "missing field"))
    }

    fn real(&mut self) -> Result<f64, RunError> {
        let w = self.word()?;
        w.parse().map_err(|_| corrupt(self.path, self.line, format!("bad real {w:?}")))
    }

    fn complex(&mut self) -> Result<Complex64, RunError> {
        Ok(Complex64::new(self.real()?, self.real()?))
    }

    fn count(&mut self) -> Result<usize, RunError> {
        let w = self.word()?;
        w.parse().map_err(|_| corrupt(self.path, self.line, format!("bad integer {w:?}")))
    }

    fn key(&mut self, expected: &str) -> Result<(), RunError> {
        let w = self.word()?;
        if w == expected {
            Ok(())
        } else {
            Err(corrupt(self.path, self.line, format!("expected {expected}, found {w}")))
        }
    }

    fn end(mut self) -> Result<(), RunError> {
        match self.it.next() {
            None => Ok(()),
            Some(w) => Err(corrupt(self.path, self.line, format!("unexpected field {w:?}"))),
        }
    }
}

pub fn write_dynamical_g(path: &Path, grid: &[Complex64], values: &[Complex64]) -> Result<(), RunError> {
    let mut s = String::new();
    for (z, g) in grid.iter().zip(values) {
        let _ = writeln!(s, "{:.16e} {:.16e} {:.16e} {:.16e}", z.re, z.im, g.re, g.im);
    }
    finish(path, create(path)?, &s)
}

/// Reads `dynamicalG.dat` back as `(ω, G)` pairs.
pub fn read_dynamical_g(path: &Path) -> Result<Vec<(Complex64, Complex64)>, RunError> {
    data_lines(path)?
        .iter()
        .map(|(n, l)| {
            let mut f = Fields::new(path, *n, l);
            let pair = (f.complex()?, f.complex()?);
            f.end()?;
            Ok(pair)
        })
        .collect()
}

pub fn write_residuals(path: &Path, comment: Option<&str>, history: &[(usize, f64, usize)]) -> Result<(), RunError> {
    let mut s = String::new();
    if let Some(c) = comment {
        let _ = writeln!(s, "# {c}");
    }
    s.push_str("# n max_residual seed_index\n");
    for (n, r, seed) in history {
        let _ = writeln!(s, "{n} {r:.16e} {seed}");
    }
    finish(path, create(path)?, &s)
}

pub fn write_log(path: &Path, log: &CoefficientLog) -> Result<(), RunError> {
    let mut s = String::from("# shiftk coefficient log\n");
    let _ = writeln!(s, "dim {}", log.dim);
    let _ = writeln!(s, "m_left {}", log.m_left);
    let _ = writeln!(s, "n_eq {}", log.n_eq);
    s.push_str("z_initial");
    fmt_c(&mut s, log.z_initial);
    s.push('\n');
    let _ = writeln!(s, "threshold {:.16e}", log.threshold);
    let _ = writeln!(s, "iterations {}", log.len());
    let seeds = log.seed_history();
    let _ = writeln!(s, "seeds {}", seeds.len());
    for (n, z) in seeds {
        let _ = write!(s, "{n}");
        fmt_c(&mut s, z);
        s.push('\n');
    }
    s.push_str("# n z_seed alpha beta_prev alpha_prev rho residual_norm switch\n");
    for (n, r) in log.records.iter().enumerate() {
        let _ = write!(s, "{n}");
        for z in [r.z_seed, r.alpha, r.beta_prev, r.alpha_prev, r.rho] {
            fmt_c(&mut s, z);
        }
        let _ = write!(s, " {:.16e}", r.residual_norm);
        match r.switch {
            None => s.push_str(" -"),
            Some(sw) => {
                let _ = write!(s, " {} {}", sw.from, sw.to);
                for z in [sw.z_seed, sw.pi_new, sw.pi_old] {
                    fmt_c(&mut s, z);
                }
            }
        }
        s.push('\n');
    }
    finish(path, create(path)?, &s)
}

pub fn write_projected_residuals(path: &Path, log: &CoefficientLog) -> Result<(), RunError> {
    let mut s = String::from("# m_left iterations, then n and P r_n per line\n");
    let _ = writeln!(s, "{} {}", log.m_left, log.len());
    for (n, r) in log.records.iter().enumerate() {
        let _ = write!(s, "{n}");
        for &z in &r.projected_residual {
            fmt_c(&mut s, z);
        }
        s.push('\n');
    }
    finish(path, create(path)?, &s)
}

/// Reads `TriDiagComp.dat` and `ResVec.dat` into a log.
pub fn read_log(tridiag: &Path, resvec: &Path) -> Result<CoefficientLog, RunError> {
    let lines = data_lines(tridiag)?;
    let mut it = lines.iter();
    let mut next = |what: &str| {
        it.next()
            .ok_or_else(|| corrupt(tridiag, 0, format!("truncated before {what}")))
    };
    let mut header = |key: &str| -> Result<(usize, String), RunError> {
        let (n, l) = next(key)?;
        Ok((*n, l.clone()))
    };
    let field = |(n, l): &(usize, String), key: &str| -> Result<usize, RunError> {
        let mut f = Fields::new(tridiag, *n, l);
        f.key(key)?;
        let v = f.count()?;
        f.end()?;
        Ok(v)
    };
    let dim = field(&header("dim")?, "dim")?;
    let m_left = field(&header("m_left")?, "m_left")?;
    let n_eq = field(&header("n_eq")?, "n_eq")?;
    let (n, l) = header("z_initial")?;
    let mut f = Fields::new(tridiag, n, &l);
    f.key("z_initial")?;
    let z_initial = f.complex()?;
    f.end()?;
    let (n, l) = header("threshold")?;
    let mut f = Fields::new(tridiag, n, &l);
    f.key("threshold")?;
    let threshold = f.real()?;
    f.end()?;
    let iterations = field(&header("iterations")?, "iterations")?;
    let seeds = field(&header("seeds")?, "seeds")?;
    for _ in 0..seeds {
        header("seed history")?;
    }
    let mut records = Vec::with_capacity(iterations);
    for k in 0..iterations {
        let (n, l) = header("iteration records")?;
        let mut f = Fields::new(tridiag, n, &l);
        if f.count()? != k {
            return Err(corrupt(tridiag, n, format!("expected iteration {k}")));
        }
        let z_seed = f.complex()?;
        let alpha = f.complex()?;
        let beta_prev = f.complex()?;
        let alpha_prev = f.complex()?;
        let rho = f.complex()?;
        let residual_norm = f.real()?;
        let switch = match f.word()? {
            "-" => None,
            from => {
                let from = from
                    .parse()
                    .map_err(|_| corrupt(tridiag, n, format!("bad switch {from:?}")))?;
                Some(SeedSwitch {
                    from,
                    to: f.count()?,
                    z_seed: f.complex()?,
                    pi_new: f.complex()?,
                    pi_old: f.complex()?,
                })
            }
        };
        f.end()?;
        records.push(IterationRecord {
            z_seed,
            alpha,
            beta_prev,
            alpha_prev,
            rho,
            projected_residual: Vec::new(),
            residual_norm,
            switch,
        });
    }
    if let Some((n, _)) = it.next() {
        return Err(corrupt(tridiag, *n, "trailing data"));
    }

    let lines = data_lines(resvec)?;
    let Some(((n, first), rest)) = lines.split_first() else {
        return Err(corrupt(resvec, 0, "empty file"));
    };
    let mut f = Fields::new(resvec, *n, first);
    let rv_m_left = f.count()?;
    let rv_iter = f.count()?;
    f.end()?;
    if rv_m_left != m_left || rv_iter != iterations || rest.len() != iterations {
        return Err(corrupt(
            resvec,
            *n,
            format!("does not match the coefficient log ({m_left} rows, {iterations} iterations)"),
        ));
    }
    for (k, ((n, l), rec)) in rest.iter().zip(records.iter_mut()).enumerate() {
        let mut f = Fields::new(resvec, *n, l);
        if f.count()? != k {
            return Err(corrupt(resvec, *n, format!("expected iteration {k}")));
        }
        rec.projected_residual = (0..m_left).map(|_| f.complex()).collect::<Result<_, _>>()?;
        f.end()?;
    }
    Ok(CoefficientLog {
        dim,
        m_left,
        n_eq,
        z_initial,
        threshold,
        records,
    })
}

pub fn write_checkpoint(path: &Path, cp: &SeedCheckpoint) -> Result<(), RunError> {
    let mut s = String::from("# shiftk restart vectors\n");
    let _ = writeln!(s, "method {}", cp.method);
    let _ = writeln!(s, "iteration {}", cp.iteration);
    let _ = writeln!(s, "dim {}", cp.residual.len());
    for (key, z) in [("z_seed", cp.z_seed), ("alpha_prev", cp.alpha_prev), ("rho_prev", cp.rho_prev)] {
        s.push_str(key);
        fmt_c(&mut s, z);
        s.push('\n');
    }
    let mut vectors = vec![&cp.residual, &cp.residual_prev];
    if let Some((a, b)) = &cp.shadow {
        vectors.push(a);
        vectors.push(b);
    }
    for v in vectors {
        for &z in v {
            let _ = writeln!(s, "{:.16e} {:.16e}", z.re, z.im);
        }
    }
    finish(path, create(path)?, &s)
}

pub fn read_checkpoint(path: &Path) -> Result<SeedCheckpoint, RunError> {
    let lines = data_lines(path)?;
    let mut it = lines.iter();
    let mut line = || it.next().ok_or_else(|| corrupt(path, 0, "truncated file"));
    let (n, l) = line()?;
    let mut f = Fields::new(path, *n, l);
    f.key("method")?;
    let w = f.word()?;
    let method: Method = w.parse().map_err(|e: String| corrupt(path, *n, e))?;
    f.end()?;
    let mut scalar_count = |key: &str| -> Result<usize, RunError> {
        let (n, l) = line()?;
        let mut f = Fields::new(path, *n, l);
        f.key(key)?;
        let v = f.count()?;
        f.end()?;
        Ok(v)
    };
    let iteration = scalar_count("iteration")?;
    let dim = scalar_count("dim")?;
    let mut scalars = [Complex64::new(0.0, 0.0); 3];
    for (slot, key) in scalars.iter_mut().zip(["z_seed", "alpha_prev", "rho_prev"]) {
        let (n, l) = line()?;
        let mut f = Fields::new(path, *n, l);
        f.key(key)?;
        *slot = f.complex()?;
        f.end()?;
    }
    let n_vectors = if method == Method::Bicg { 4 } else { 2 };
    let mut vectors = Vec::with_capacity(n_vectors);
    for _ in 0..n_vectors {
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (n, l) = line()?;
            let mut f = Fields::new(path, *n, l);
            v.push(f.complex()?);
            f.end()?;
        }
        vectors.push(v);
    }
    if let Some((n, _)) = it.next() {
        return Err(corrupt(path, *n, "trailing data"));
    }
    let mut vectors = vectors.into_iter();
    let residual = vectors.next().unwrap_or_default();
    let residual_prev = vectors.next().unwrap_or_default();
    let shadow = vectors.next().zip(vectors.next());
    Ok(SeedCheckpoint {
        method,
        iteration,
        z_seed: scalars[0],
        alpha_prev: scalars[1],
        rho_prev: scalars[2],
        residual,
        residual_prev,
        shadow,
    })
}
