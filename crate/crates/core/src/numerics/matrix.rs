use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Relative tolerance for the Hermiticity check, scaled by `max(1, max|A_ij|)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A dense complex matrix whose entries are guaranteed finite.
///
/// Thin wrapper over [`nalgebra::DMatrix`]; the raw matrix is reachable
/// through [`ComplexMatrix::as_dmatrix`] for anything not covered here.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn from_dmatrix(data: DMatrix<Complex64>) -> Result<Self> {
        for col in 0..data.ncols() {
            for row in 0..data.nrows() {
                let z = data[(row, col)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self { data })
    }

    /// Wraps a matrix that is finite by construction.
    pub(crate) fn from_dmatrix_unchecked(data: DMatrix<Complex64>) -> Self {
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { data }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_fn(nrows, ncols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { data: DMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self { data: DMatrix::identity(n, n) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint() }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { data: &self.data * factor }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A_ij - conj(A_ji)|`, or infinity for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn hermitian_tolerance(&self) -> f64 {
        HERMITIAN_TOLERANCE * self.max_abs().max(1.0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.hermiticity_defect() <= self.hermitian_tolerance()
    }

    /// The Hermitian part `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self { data: (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    fn check_same_square(&self, other: &Self, what: &str) -> Result<()> {
        if !self.is_square() || self.data.shape() != other.data.shape() {
            return Err(Error::Dimension(format!(
                "{what} needs equal square operands, got {:?} and {:?}",
                self.data.shape(),
                other.data.shape()
            )));
        }
        Ok(())
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_square(other, "commutator")?;
        Ok(Self { data: &self.data * &other.data - &other.data * &self.data })
    }

    /// Normalized Hilbert-Schmidt product `Tr(A* B) / n`.
    pub fn normalized_hs_inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_square(other, "inner product")?;
        let n = self.rows() as f64;
        Ok(self.hs_inner_unnormalized(other) / n)
    }

    fn hs_inner_unnormalized(&self, other: &Self) -> Complex64 {
        self.data.iter().zip(other.data.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Column-major vectorization, `vec(A)[i + j * rows] = A[i][j]`.
    pub fn vectorize(&self) -> Vec<Complex64> {
        self.data.as_slice().to_vec()
    }

    pub fn from_vectorized(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_column_slice(rows, cols, entries))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix { data: &self.data + &rhs.data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix { data: &self.data - &rhs.data }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix { data: &self.data * &rhs.data }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { data: -&self.data }
    }
}
