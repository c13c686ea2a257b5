//! Matrix Market exchange files.
//!
//! Coordinate files carry square sparse matrices (or `M × 1` sparse vectors),
//! array files carry dense vectors. Fields `real`/`integer`/`complex` and
//! symmetries `general`/`symmetric`/`hermitian` are understood; `pattern` and
//! `skew-symmetric` are rejected. Reals are written with 17 significant digits.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use super::sparse::{Duplicates, SparseMatrix, Symmetry};
use super::vector::DenseVector;
use super::LinalgError;

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed banner: {0}")]
    Banner(String),
    #[error("unsupported qualifier `{0}`")]
    Unsupported(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("line {line}: index ({row}, {col}) outside {rows}x{cols}")]
    IndexOutOfBounds {
        line: usize,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("complex-valued file read where real values are required")]
    ComplexInRealContext,
    #[error("expected a {expected}, found a {found}")]
    WrongObject {
        expected: &'static str,
        found: &'static str,
    },
    #[error(transparent)]
    Assembly(#[from] LinalgError),
}

/// What a Matrix Market file decoded to.
#[derive(Debug, Clone, PartialEq)]
pub enum MarketObject {
    Matrix(SparseMatrix),
    Vector(DenseVector),
}

impl MarketObject {
    fn kind(&self) -> &'static str {
        match self {
            MarketObject::Matrix(_) => "matrix",
            MarketObject::Vector(_) => "vector",
        }
    }

    pub fn into_matrix(self) -> Result<SparseMatrix, MarketError> {
        match self {
            MarketObject::Matrix(m) => Ok(m),
            other => Err(MarketError::WrongObject {
                expected: "matrix",
                found: other.kind(),
            }),
        }
    }

    pub fn into_vector(self) -> Result<DenseVector, MarketError> {
        match self {
            MarketObject::Vector(v) => Ok(v),
            other => Err(MarketError::WrongObject {
                expected: "vector",
                found: other.kind(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy)]
struct Header {
    format: Format,
    field: Field,
    symmetry: Symmetry,
}

fn parse_banner(line: &str) -> Result<Header, MarketError> {
    let tokens: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(MarketError::Banner(line.trim().to_string()));
    }
    if tokens[1] != "matrix" {
        return Err(MarketError::Unsupported(tokens[1].clone()));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => return Err(MarketError::Unsupported(other.to_string())),
    };
    let field = match tokens[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(MarketError::Unsupported(other.to_string())),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(MarketError::Unsupported(other.to_string())),
    };
    Ok(Header {
        format,
        field,
        symmetry,
    })
}

fn parse_real(token: &str, line: usize) -> Result<f64, MarketError> {
    token
        .replace(['d', 'D'], "e")
        .parse::<f64>()
        .map_err(|e| MarketError::Parse {
            line,
            message: format!("bad number `{token}`: {e}"),
        })
}

fn parse_index(token: &str, line: usize) -> Result<usize, MarketError> {
    token.parse::<usize>().map_err(|e| MarketError::Parse {
        line,
        message: format!("bad index `{token}`: {e}"),
    })
}

fn parse_value(tokens: &[&str], field: Field, line: usize) -> Result<Complex64, MarketError> {
    let want = match field {
        Field::Real => 1,
        Field::Complex => 2,
    };
    if tokens.len() != want {
        return Err(MarketError::Parse {
            line,
            message: format!("expected {want} value field(s), found {}", tokens.len()),
        });
    }
    let re = parse_real(tokens[0], line)?;
    let im = if want == 2 { parse_real(tokens[1], line)? } else { 0.0 };
    Ok(Complex64::new(re, im))
}

/// Reads a Matrix Market file.
pub fn read(path: impl AsRef<Path>) -> Result<MarketObject, MarketError> {
    read_from(BufReader::new(File::open(path)?))
}

/// Reads a file that must hold real values only.
pub fn read_real(path: impl AsRef<Path>) -> Result<MarketObject, MarketError> {
    read_from_checked(BufReader::new(File::open(path)?), true)
}

pub fn read_from(reader: impl BufRead) -> Result<MarketObject, MarketError> {
    read_from_checked(reader, false)
}

fn read_from_checked(reader: impl BufRead, require_real: bool) -> Result<MarketObject, MarketError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let header = match lines.next() {
        Some((_, line)) => parse_banner(&line?)?,
        None => return Err(MarketError::Banner(String::new())),
    };
    if require_real && header.field == Field::Complex {
        return Err(MarketError::ComplexInRealContext);
    }

    let mut content = Vec::new();
    for (number, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        content.push((number, trimmed.to_string()));
    }
    let mut content = content.into_iter();
    let (size_line, size) = content.next().ok_or(MarketError::Parse {
        line: 0,
        message: "missing size line".into(),
    })?;
    let size: Vec<&str> = size.split_whitespace().collect();

    match header.format {
        Format::Coordinate => {
            if size.len() != 3 {
                return Err(MarketError::Parse {
                    line: size_line,
                    message: "coordinate size line needs `rows cols nnz`".into(),
                });
            }
            let rows = parse_index(size[0], size_line)?;
            let cols = parse_index(size[1], size_line)?;
            let nnz = parse_index(size[2], size_line)?;
            let mut triplets = Vec::with_capacity(nnz);
            for (line, text) in content {
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(MarketError::Parse {
                        line,
                        message: "entry needs row and column".into(),
                    });
                }
                let row = parse_index(tokens[0], line)?;
                let col = parse_index(tokens[1], line)?;
                if row == 0 || col == 0 || row > rows || col > cols {
                    return Err(MarketError::IndexOutOfBounds {
                        line,
                        row,
                        col,
                        rows,
                        cols,
                    });
                }
                let value = parse_value(&tokens[2..], header.field, line)?;
                triplets.push((row - 1, col - 1, value));
            }
            if triplets.len() != nnz {
                return Err(MarketError::EntryCount {
                    expected: nnz,
                    found: triplets.len(),
                });
            }
            if cols == 1 && rows > 1 {
                if header.symmetry != Symmetry::General {
                    return Err(MarketError::Unsupported("symmetric vector".into()));
                }
                let mut v = DenseVector::zeros(rows);
                for (r, _, value) in triplets {
                    v[r] += value;
                }
                return Ok(MarketObject::Vector(v));
            }
            if rows != cols {
                return Err(MarketError::Unsupported(format!("non-square {rows}x{cols} matrix")));
            }
            let m = SparseMatrix::from_triplets(rows, triplets, header.symmetry, Duplicates::Reject)?;
            Ok(MarketObject::Matrix(m))
        }
        Format::Array => {
            if size.len() != 2 {
                return Err(MarketError::Parse {
                    line: size_line,
                    message: "array size line needs `rows cols`".into(),
                });
            }
            let rows = parse_index(size[0], size_line)?;
            let cols = parse_index(size[1], size_line)?;
            if cols != 1 || header.symmetry != Symmetry::General {
                return Err(MarketError::Unsupported("dense array other than a column vector".into()));
            }
            let values = content
                .map(|(line, text)| {
                    let tokens: Vec<&str> = text.split_whitespace().collect();
                    parse_value(&tokens, header.field, line)
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() != rows {
                return Err(MarketError::EntryCount {
                    expected: rows,
                    found: values.len(),
                });
            }
            Ok(MarketObject::Vector(values.into()))
        }
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a matrix or vector.
pub fn write(object: &MarketObject, path: impl AsRef<Path>) -> Result<(), MarketError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_to(object, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_matrix(matrix: &SparseMatrix, path: impl AsRef<Path>) -> Result<(), MarketError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_to(matrix, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_vector(vector: &[Complex64], path: impl AsRef<Path>) -> Result<(), MarketError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_vector_to(vector, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_to(object: &MarketObject, w: &mut impl Write) -> Result<(), MarketError> {
    match object {
        MarketObject::Matrix(m) => write_matrix_to(m, w),
        MarketObject::Vector(v) => write_vector_to(v, w),
    }
}

pub fn write_matrix_to(m: &SparseMatrix, w: &mut impl Write) -> Result<(), MarketError> {
    let real = m.is_real();
    let field = if real { "real" } else { "complex" };
    // A real Hermitian matrix is written with the standard `symmetric` tag.
    let symmetry = match (m.symmetry(), real) {
        (Symmetry::General, _) => "general",
        (Symmetry::Symmetric, _) | (Symmetry::Hermitian, true) => "symmetric",
        (Symmetry::Hermitian, false) => "hermitian",
    };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} {symmetry}")?;
    let stored: Vec<_> = m.stored_triplets().collect();
    writeln!(w, "{} {} {}", m.dim(), m.dim(), stored.len())?;
    for (r, c, v) in stored {
        if real {
            writeln!(w, "{} {} {}", r + 1, c + 1, fmt_real(v.re))?;
        } else {
            writeln!(w, "{} {} {} {}", r + 1, c + 1, fmt_real(v.re), fmt_real(v.im))?;
        }
    }
    Ok(())
}

pub fn write_vector_to(v: &[Complex64], w: &mut impl Write) -> Result<(), MarketError> {
    writeln!(w, "%%MatrixMarket matrix array complex general")?;
    writeln!(w, "{} 1", v.len())?;
    for z in v {
        writeln!(w, "{} {}", fmt_real(z.re), fmt_real(z.im))?;
    }
    Ok(())
}
