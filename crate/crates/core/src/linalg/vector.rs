//! Dense complex vectors and the handful of BLAS-1 style primitives the
//! recurrences need.

use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use super::LinalgError;

/// A dense, heap-allocated complex vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<Complex64>);

impl DenseVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    /// Unit basis vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.0)
    }

    /// Scales in place so that the 2-norm is one. Returns the previous norm.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm2();
        if n > 0.0 {
            scale(1.0 / n, &mut self.0);
        }
        n
    }
}

impl Deref for DenseVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }
}

impl From<Vec<Complex64>> for DenseVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl FromIterator<Complex64> for DenseVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

/// Conjugated inner product `Σ conj(x_i) y_i`.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Bilinear (unconjugated) product `Σ x_i y_i`, the inner product of COCG.
pub fn dot_unconjugated(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `y ← a·x + y`
pub fn axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scale(a: f64, x: &mut [Complex64]) {
    for xi in x {
        *xi *= a;
    }
}

pub fn scale_complex(a: Complex64, x: &mut [Complex64]) {
    for xi in x {
        *xi *= a;
    }
}

/// Length-checked variants for callers that cannot guarantee matching sizes.
pub fn try_dot(x: &[Complex64], y: &[Complex64]) -> Result<Complex64, LinalgError> {
    check_len(x.len(), y.len())?;
    Ok(dot(x, y))
}

pub fn try_dot_unconjugated(x: &[Complex64], y: &[Complex64]) -> Result<Complex64, LinalgError> {
    check_len(x.len(), y.len())?;
    Ok(dot_unconjugated(x, y))
}

pub fn try_axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) -> Result<(), LinalgError> {
    check_len(y.len(), x.len())?;
    axpy(a, x, y);
    Ok(())
}
