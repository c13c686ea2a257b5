//! Fortran-style namelist input.
//!
//! ```text
//! &filename
//!   inham = "Ham.dat"
//!   invec = "Excited.dat"
//! /
//! &cg
//!   maxloops = 100
//!   convfactor = 6
//! /
//! &dyn
//!   calctype = "normal"
//!   nomega = 100
//!   omegamin = (-2d0, 0.1d0)
//!   omegamax = ( 1d0, 0.1d0)
//! /
//! ```
//!
//! Keys are case-insensitive; `!` starts a comment.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown section &{name}")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key {key} in &{section}")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: key {key} expects {expected}")]
    BadValue { line: usize, key: String, expected: &'static str },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Str(String),
    Complex(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalcType {
    Normal,
    Recalc,
    Restart,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilenameSection {
    pub inham: Option<String>,
    pub invec: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgSection {
    /// `None` means the matrix dimension.
    pub maxloops: Option<usize>,
    pub convfactor: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynSection {
    pub calctype: CalcType,
    pub nomega: usize,
    pub omegamin: Complex64,
    pub omegamax: Complex64,
    pub outrestart: bool,
    /// Seed of the random initial vector when `invec` is absent.
    pub rndseed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamSection {
    pub nsite: usize,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub dz: f64,
    /// Restrict to `Σ 2 S^z = two_sz`.
    pub two_sz: Option<i32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputConfig {
    pub filename: FilenameSection,
    pub cg: CgSection,
    pub dyn_: DynSection,
    pub ham: Option<HamSection>,
}

impl Default for CgSection {
    fn default() -> Self {
        Self {
            maxloops: None,
            convfactor: 6,
        }
    }
}

impl Default for DynSection {
    fn default() -> Self {
        Self {
            calctype: CalcType::Normal,
            nomega: 100,
            omegamin: Complex64::new(-2.0, 0.1),
            omegamax: Complex64::new(2.0, 0.1),
            outrestart: false,
            rndseed: 0,
        }
    }
}

impl Default for HamSection {
    fn default() -> Self {
        Self {
            nsite: 4,
            jx: 1.0,
            jy: 1.0,
            jz: 1.0,
            dz: 0.0,
            two_sz: None,
        }
    }
}

impl InputConfig {
    /// Iteration budget for a problem of dimension `dim`.
    pub fn maxloops(&self, dim: usize) -> usize {
        self.cg.maxloops.unwrap_or(dim.max(1))
    }

    pub fn threshold(&self) -> f64 {
        10f64.powi(-self.cg.convfactor)
    }
}

pub fn parse_input(path: impl AsRef<Path>) -> Result<InputConfig, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<InputConfig, ParseError> {
    let mut filename = FilenameSection::default();
    let mut cg = CgSection::default();
    let mut dyn_ = DynSection::default();
    let mut ham: Option<HamSection> = None;
    let mut section: Option<(String, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut rest = strip_comment(raw).trim();
        while !rest.is_empty() {
            if section.is_none() {
                let Some(after) = rest.strip_prefix('&') else {
                    return Err(syntax(line, format!("expected &section, found {rest:?}")));
                };
                let end = after.find(|c: char| c.is_whitespace()).unwrap_or(after.len());
                let name = after[..end].to_ascii_lowercase();
                match name.as_str() {
                    "filename" | "cg" | "dyn" => {}
                    "ham" => {
                        ham.get_or_insert_with(HamSection::default);
                    }
                    _ => return Err(ParseError::UnknownSection { line, name }),
                }
                section = Some((name, line));
                rest = after[end..].trim_start();
                continue;
            }
            if let Some(after) = rest.strip_prefix('/') {
                section = None;
                rest = after.trim_start();
                continue;
            }
            let (key, value, tail) = split_assignment(rest, line)?;
            let name = section.as_ref().map(|s| s.0.clone()).unwrap_or_default();
            assign(&name, &key, value, line, &mut filename, &mut cg, &mut dyn_, ham.as_mut())?;
            rest = tail.trim_start().trim_start_matches(',').trim_start();
        }
    }
    if let Some((name, line)) = section {
        return Err(syntax(line, format!("section &{name} is not terminated by /")));
    }

    if filename.inham.is_some() && ham.is_some() {
        return Err(ParseError::Invalid(
            "both inham and a &ham section are given; use one Hamiltonian source".into(),
        ));
    }
    if dyn_.nomega == 0 {
        return Err(ParseError::Invalid("nomega must be at least 1".into()));
    }
    if cg.maxloops == Some(0) {
        return Err(ParseError::Invalid("maxloops must be at least 1".into()));
    }
    if cg.convfactor < 1 {
        return Err(ParseError::Invalid("convfactor must be at least 1".into()));
    }
    Ok(InputConfig {
        filename,
        cg,
        dyn_,
        ham,
    })
}

fn syntax(line: usize, message: String) -> ParseError {
    ParseError::Syntax { line, message }
}

fn strip_comment(line: &str) -> &str {
    let mut quote: Option<char> = None;
    for (i, ch) in line.char_indices() {
        match (quote, ch) {
            (None, '"' | '\'') => quote = Some(ch),
            (Some(q), c) if c == q => quote = None,
            (None, '!') => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Splits `key = value[, ...]`, returning the unparsed remainder.
fn split_assignment(s: &str, line: usize) -> Result<(String, Value, &str), ParseError> {
    let eq = s
        .find('=')
        .ok_or_else(|| syntax(line, format!("expected key = value, found {s:?}")))?;
    let key = s[..eq].trim();
    if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(syntax(line, format!("invalid key {key:?}")));
    }
    let rhs = s[eq + 1..].trim_start();
    let end = value_end(rhs, line)?;
    let literal = rhs[..end].trim();
    let value = parse_value(literal).ok_or_else(|| syntax(line, format!("malformed literal {literal:?}")))?;
    Ok((key.to_ascii_lowercase(), value, &rhs[end..]))
}

/// End of the literal at the start of `s`.
fn value_end(s: &str, line: usize) -> Result<usize, ParseError> {
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err(syntax(line, "missing value".into())),
        Some((_, q @ ('"' | '\''))) => chars
            .find(|&(_, c)| c == q)
            .map(|(i, _)| i + 1)
            .ok_or_else(|| syntax(line, "unterminated string".into())),
        Some((_, '(')) => chars
            .find(|&(_, c)| c == ')')
            .map(|(i, _)| i + 1)
            .ok_or_else(|| syntax(line, "unterminated complex literal".into())),
        Some(_) => Ok(s
            .find(|c: char| c == ',' || c == '/' || c.is_whitespace())
            .unwrap_or(s.len())),
    }
}

/// Real with optional Fortran `d` exponent.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    s.replace(['d', 'D'], "e").parse::<f64>().ok()
}

fn parse_value(s: &str) -> Option<Value> {
    if let Some(inner) = s.strip_prefix('"').and_then(|t| t.strip_suffix('"')) {
        return Some(Value::Str(inner.to_string()));
    }
    if let Some(inner) = s.strip_prefix('\'').and_then(|t| t.strip_suffix('\'')) {
        return Some(Value::Str(inner.to_string()));
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner.split_once(',')?;
        return Some(Value::Complex(Complex64::new(parse_real(re)?, parse_real(im)?)));
    }
    match s.to_ascii_lowercase().as_str() {
        ".true." | ".t." | "t" | "true" => return Some(Value::Bool(true)),
        ".false." | ".f." | "f" | "false" => return Some(Value::Bool(false)),
        _ => {}
    }
    if let Ok(i) = s.parse::<i64>() {
        return Some(Value::Int(i));
    }
    parse_real(s).map(Value::Real)
}

fn as_real(v: &Value) -> Option<f64> {
    match *v {
        Value::Int(i) => Some(i as f64),
        Value::Real(r) => Some(r),
        _ => None,
    }
}

fn as_complex(v: &Value) -> Option<Complex64> {
    match *v {
        Value::Complex(c) => Some(c),
        _ => as_real(v).map(|r| Complex64::new(r, 0.0)),
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    section: &str,
    key: &str,
    value: Value,
    line: usize,
    filename: &mut FilenameSection,
    cg: &mut CgSection,
    dyn_: &mut DynSection,
    ham: Option<&mut HamSection>,
) -> Result<(), ParseError> {
    let bad = |expected| ParseError::BadValue {
        line,
        key: key.to_string(),
        expected,
    };
    let string = |v: Value| match v {
        Value::Str(s) => Ok(s),
        _ => Err(bad("a quoted string")),
    };
    let count = |v: &Value| match *v {
        Value::Int(i) if i >= 0 => Ok(i as usize),
        _ => Err(bad("a nonnegative integer")),
    };
    let real = |v: &Value| as_real(v).ok_or_else(|| bad("a real number"));
    match (section, key) {
        ("filename", "inham") => filename.inham = Some(string(value)?).filter(|s| !s.is_empty()),
        ("filename", "invec") => filename.invec = Some(string(value)?).filter(|s| !s.is_empty()),
        ("cg", "maxloops") => cg.maxloops = Some(count(&value)?),
        ("cg", "convfactor") => match value {
            Value::Int(i) => cg.convfactor = i32::try_from(i).map_err(|_| bad("an integer"))?,
            _ => return Err(bad("an integer")),
        },
        ("dyn", "calctype") => {
            dyn_.calctype = match string(value)?.to_ascii_lowercase().as_str() {
                "normal" => CalcType::Normal,
                "recalc" => CalcType::Recalc,
                "restart" => CalcType::Restart,
                _ => return Err(bad("one of \"normal\", \"recalc\", \"restart\"")),
            }
        }
        ("dyn", "nomega") => dyn_.nomega = count(&value)?,
        ("dyn", "omegamin") => dyn_.omegamin = as_complex(&value).ok_or_else(|| bad("a complex literal"))?,
        ("dyn", "omegamax") => dyn_.omegamax = as_complex(&value).ok_or_else(|| bad("a complex literal"))?,
        ("dyn", "outrestart") => match value {
            Value::Bool(b) => dyn_.outrestart = b,
            _ => return Err(bad("a logical (.TRUE. or .FALSE.)")),
        },
        ("dyn", "rndseed") => dyn_.rndseed = count(&value)? as u64,
        ("ham", k) => {
            let ham = ham.expect("ham section is created when opened");
            match k {
                "nsite" => ham.nsite = count(&value)?,
                "jx" => ham.jx = real(&value)?,
                "jy" => ham.jy = real(&value)?,
                "jz" => ham.jz = real(&value)?,
                "dz" => ham.dz = real(&value)?,
                "two_sz" | "twosz" => match value {
                    Value::Int(i) => ham.two_sz = Some(i32::try_from(i).map_err(|_| bad("an integer"))?),
                    _ => return Err(bad("an integer")),
                },
                _ => {
                    return Err(ParseError::UnknownKey {
                        line,
                        section: section.to_string(),
                        key: key.to_string(),
                    })
                }
            }
        }
        _ => {
            return Err(ParseError::UnknownKey {
                line,
                section: section.to_string(),
                key: key.to_string(),
            })
        }
    }
    Ok(())
}

/// `ω_i = ω_min + i (ω_max - ω_min) / n` for `i = 0..n`; the right end is excluded.
pub fn frequency_grid(omegamin: Complex64, omegamax: Complex64, nomega: usize) -> Vec<Complex64> {
    let step = (omegamax - omegamin) / nomega as f64;
    (0..nomega).map(|i| omegamin + step * i as f64).collect()
}
