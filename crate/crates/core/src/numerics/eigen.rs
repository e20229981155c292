use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Components below this magnitude are skipped when fixing eigenvector phases.
const PHASE_ANCHOR_THRESHOLD: f64 = 1e-8;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
///
/// Column `i` of `eigenvectors` belongs to `eigenvalues[i]`. Each column is
/// phased so that its first component of magnitude above `1e-8` is real and
/// positive, which makes the decomposition reproducible bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, index: usize) -> Vec<Complex64> {
        self.eigenvectors.as_dmatrix().column(index).iter().copied().collect()
    }

    /// `V Λ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = self.eigenvectors.as_dmatrix();
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(lambda);
        }
        ComplexMatrix::from_dmatrix_unchecked(scaled * v.adjoint())
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension(format!(
            "Hermitian eigenproblem needs a non-empty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let deviation = a.hermiticity_defect();
    let tolerance = a.hermitian_tolerance();
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before factorization so round-off asymmetry
/// within the acceptance tolerance does not leak into the result.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(a)?;
    let eig = a.hermitian_part().into_dmatrix().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let column = eig.eigenvectors.column(src);
        let anchor = column
            .iter()
            .find(|z| z.norm() > PHASE_ANCHOR_THRESHOLD)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = anchor.conj() / anchor.norm();
        for (row, z) in column.iter().enumerate() {
            vectors[(row, dst)] = z * phase;
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_dmatrix(vectors)?,
    })
}

/// Eigenvalues only, ascending. Cheaper than [`hermitian_eigen`].
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let mut values: Vec<f64> = a.hermitian_part().into_dmatrix().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = a.as_dmatrix().clone().singular_values().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Operator 2-norm (largest singular value).
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}
