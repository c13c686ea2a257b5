//! Dense reference routines used as oracles: assembly, Hermitian
//! eigendecomposition and direct shifted solves.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::ModelError;
use crate::linalg::{LinearOperator, SparseMatrix};

/// Largest dimension the dense routines accept.
pub const DENSE_LIMIT: usize = 2048;

fn guard(dim: usize) -> Result<(), ModelError> {
    if dim > DENSE_LIMIT {
        Err(ModelError::DenseTooLarge { dim, limit: DENSE_LIMIT })
    } else {
        Ok(())
    }
}

pub fn dense_assemble(h: &SparseMatrix) -> Result<DMatrix<Complex64>, ModelError> {
    guard(h.dim())?;
    let mut m = DMatrix::zeros(h.dim(), h.dim());
    for (i, j, v) in h.triplets() {
        m[(i, j)] = v;
    }
    Ok(m)
}

/// Dense matrix of any operator, one column per unit-vector product.
pub fn dense_from_operator<O: LinearOperator + ?Sized>(op: &O) -> Result<DMatrix<Complex64>, ModelError> {
    let n = op.dim();
    guard(n)?;
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        m.set_column(j, &DVector::from_column_slice(&col));
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(m)
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Eigen {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j).iter().copied().collect()
    }
}

/// Hermitian eigendecomposition. Only the Hermitian part `(A + A†)/2` is used.
pub fn dense_eig(a: &DMatrix<Complex64>) -> Result<Eigen, ModelError> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(ModelError::NotSquare);
    }
    guard(n)?;
    let herm = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let (values, vectors) = if herm.iter().all(|z| z.im == 0.0) {
        let re = herm.map(|z| z.re);
        let eig = SymmetricEigen::new(re);
        (eig.eigenvalues, eig.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::new(herm);
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(Eigen {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Solves `(z I - H) x = b` by LU.
pub fn dense_shifted_solve(
    h: &DMatrix<Complex64>,
    z: Complex64,
    b: &[Complex64],
) -> Result<Vec<Complex64>, ModelError> {
    let n = h.nrows();
    let a = DMatrix::from_diagonal_element(n, n, z) - h;
    let x = a
        .lu()
        .solve(&DVector::from_column_slice(b))
        .ok_or(ModelError::Singular)?;
    Ok(x.iter().copied().collect())
}

/// `(z I - H)^{-1}` by LU.
pub fn dense_resolvent(h: &DMatrix<Complex64>, z: Complex64) -> Result<DMatrix<Complex64>, ModelError> {
    let n = h.nrows();
    let a = DMatrix::from_diagonal_element(n, n, z) - h;
    a.try_inverse().ok_or(ModelError::Singular)
}
