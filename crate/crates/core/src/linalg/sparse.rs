//! Compressed-row complex sparse matrices and the operator abstraction the
//! solvers talk to.
//!
//! Symmetric and Hermitian matrices are stored fully expanded: a file or
//! builder supplies one triangle, assembly mirrors it, and the SpMV kernel is
//! the same branch-free row loop for every symmetry tag.

use std::cell::Cell;

use num_complex::Complex64;

use super::vector::check_len;
use super::LinalgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    General,
    /// `A = Aᵀ`
    Symmetric,
    /// `A = A†`
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Real,
    Complex,
}

/// How repeated `(row, col)` pairs are treated during assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duplicates {
    Sum,
    Reject,
}

/// Square compressed-row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_offsets: Vec<usize>,
    column_indices: Vec<usize>,
    values: Vec<Complex64>,
    symmetry: Symmetry,
    value_kind: ValueKind,
}

impl SparseMatrix {
    /// Assembles a matrix from `(row, col, value)` triplets.
    ///
    /// For `Symmetric`/`Hermitian` the triplets describe one stored triangle
    /// (either one); every off-diagonal entry is mirrored, conjugated for
    /// `Hermitian`. Specifying both `(i, j)` and `(j, i)` then produces a
    /// duplicate.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
        symmetry: Symmetry,
        duplicates: Duplicates,
    ) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::EmptyDimension);
        }
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
        for (row, col, value) in triplets {
            if row >= dim || col >= dim {
                return Err(LinalgError::IndexOutOfBounds { row, col, dim });
            }
            entries.push((row, col, value));
            if row != col {
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => entries.push((col, row, value)),
                    Symmetry::Hermitian => entries.push((col, row, value.conj())),
                }
            } else if symmetry == Symmetry::Hermitian && value.im != 0.0 {
                return Err(LinalgError::ComplexHermitianDiagonal { index: row });
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; dim + 1];
        let mut column_indices = Vec::with_capacity(entries.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (row, col, value) in entries {
            if last == Some((row, col)) {
                match duplicates {
                    Duplicates::Sum => {
                        *values.last_mut().expect("previous entry exists") += value;
                        continue;
                    }
                    Duplicates::Reject => return Err(LinalgError::DuplicateEntry { row, col }),
                }
            }
            last = Some((row, col));
            row_offsets[row + 1] += 1;
            column_indices.push(col);
            values.push(value);
        }
        for i in 0..dim {
            row_offsets[i + 1] += row_offsets[i];
        }
        let value_kind = if values.iter().all(|v| v.im == 0.0) {
            ValueKind::Real
        } else {
            ValueKind::Complex
        };
        Ok(Self {
            dim,
            row_offsets,
            column_indices,
            values,
            symmetry,
            value_kind,
        })
    }

    /// Builds a general matrix from a dense row-major closure, dropping exact zeros.
    pub fn from_dense_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self, LinalgError> {
        let triplets = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, f(i, j)))
            .filter(|t| t.2 != Complex64::new(0.0, 0.0));
        Self::from_triplets(dim, triplets, Symmetry::General, Duplicates::Sum)
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let triplets = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, Complex64::new(d, 0.0)));
        Self::from_triplets(diag.len(), triplets, Symmetry::Hermitian, Duplicates::Reject)
            .expect("diagonal assembly cannot fail for a nonempty diagonal")
    }

    /// Re-tags the matrix after verifying the claimed symmetry by explicit transpose.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Result<Self, LinalgError> {
        let ok = match symmetry {
            Symmetry::General => true,
            Symmetry::Symmetric => self.is_transpose_equal(false),
            Symmetry::Hermitian => self.is_transpose_equal(true),
        };
        if !ok {
            return Err(LinalgError::SymmetryViolated(symmetry));
        }
        self.symmetry = symmetry;
        Ok(self)
    }

    fn is_transpose_equal(&self, conjugate: bool) -> bool {
        self.triplets().all(|(i, j, v)| {
            let mirrored = self.get(j, i);
            if conjugate {
                mirrored == v.conj()
            } else {
                mirrored == v
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn value_kind(&self) -> ValueKind {
        self.value_kind
    }

    pub fn is_real(&self) -> bool {
        self.value_kind == ValueKind::Real
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn column_indices(&self) -> &[usize] {
        &self.column_indices
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Entry lookup by binary search within the row; zero when not stored.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let range = self.row_offsets[row]..self.row_offsets[row + 1];
        match self.column_indices[range.clone()].binary_search(&col) {
            Ok(k) => self.values[range.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// All stored entries of the expanded matrix in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |row| {
            (self.row_offsets[row]..self.row_offsets[row + 1])
                .map(move |k| (row, self.column_indices[k], self.values[k]))
        })
    }

    /// Entries a Matrix Market file stores: the lower triangle for
    /// symmetric/Hermitian matrices, everything otherwise.
    pub fn stored_triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let general = self.symmetry == Symmetry::General;
        self.triplets().filter(move |&(r, c, _)| general || r >= c)
    }

    /// `y ← A x`, accumulated row by row in storage order.
    pub fn spmv_into(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<(), LinalgError> {
        check_len(self.dim, x.len())?;
        check_len(self.dim, y.len())?;
        for (row, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_offsets[row]..self.row_offsets[row + 1] {
                acc += self.values[k] * x[self.column_indices[k]];
            }
            *yi = acc;
        }
        Ok(())
    }

    pub fn spmv(&self, x: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    /// `y ← A† x`
    pub fn spmv_adjoint_into(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<(), LinalgError> {
        match self.symmetry {
            Symmetry::Hermitian => self.spmv_into(x, y),
            Symmetry::Symmetric => {
                check_len(self.dim, x.len())?;
                check_len(self.dim, y.len())?;
                for (row, yi) in y.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in self.row_offsets[row]..self.row_offsets[row + 1] {
                        acc += self.values[k].conj() * x[self.column_indices[k]];
                    }
                    *yi = acc;
                }
                Ok(())
            }
            Symmetry::General => {
                check_len(self.dim, x.len())?;
                check_len(self.dim, y.len())?;
                y.fill(Complex64::new(0.0, 0.0));
                for (row, xi) in x.iter().enumerate() {
                    for k in self.row_offsets[row]..self.row_offsets[row + 1] {
                        y[self.column_indices[k]] += self.values[k].conj() * xi;
                    }
                }
                Ok(())
            }
        }
    }
}

/// A square linear map applied through reverse communication: the solvers
/// never see matrix entries, only the products returned by these calls.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y ← H x`
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);

    /// `y ← H† x`
    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]);

    fn symmetry(&self) -> Symmetry {
        Symmetry::General
    }

    fn is_real(&self) -> bool {
        false
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.spmv_into(x, y).expect("operator called with mismatched vector length");
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.spmv_adjoint_into(x, y)
            .expect("operator called with mismatched vector length");
    }

    fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    fn is_real(&self) -> bool {
        SparseMatrix::is_real(self)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        (**self).apply(x, y)
    }
    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        (**self).apply_adjoint(x, y)
    }
    fn symmetry(&self) -> Symmetry {
        (**self).symmetry()
    }
    fn is_real(&self) -> bool {
        (**self).is_real()
    }
}

/// Wraps an operator and counts every product it performs.
#[derive(Debug)]
pub struct CountingOperator<O> {
    inner: O,
    calls: Cell<usize>,
}

impl<O: LinearOperator> CountingOperator<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }

    pub fn reset(&self) {
        self.calls.set(0);
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: LinearOperator> LinearOperator for CountingOperator<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.calls.set(self.calls.get() + 1);
        self.inner.apply(x, y)
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.calls.set(self.calls.get() + 1);
        self.inner.apply_adjoint(x, y)
    }

    fn symmetry(&self) -> Symmetry {
        self.inner.symmetry()
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }
}
