use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Fourier truncation of `D = -i d/dθ` at modes `|k| ≤ n`.
///
/// Operators act on an ambient mode space `|k| ≤ n + margin`; the basis
/// index of mode `k` is `k + n + margin`. `P_n` projects onto `|k| ≤ n` and
/// `D_n = P_n D P_n`.
#[derive(Clone, Debug)]
pub struct FourierTruncation {
    n: usize,
    margin: usize,
    derivative: DMatrix<Complex64>,
    projection: DMatrix<Complex64>,
}

impl FourierTruncation {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncated dimension `2n + 1`.
    pub fn dimension(&self) -> usize {
        2 * self.n + 1
    }

    pub fn ambient_modes(&self) -> usize {
        self.n + self.margin
    }

    pub fn derivative(&self) -> &DMatrix<Complex64> {
        &self.derivative
    }

    pub fn projection(&self) -> &DMatrix<Complex64> {
        &self.projection
    }

    /// `D_n = P_n D P_n`.
    pub fn truncated_derivative(&self) -> DMatrix<Complex64> {
        &self.projection * &self.derivative * &self.projection
    }

    /// `max |[D, P_n]|`.
    pub fn commutator_defect(&self) -> f64 {
        max_entry(&(&self.derivative * &self.projection - &self.projection * &self.derivative))
    }

    /// `rank(P_n D - D P_n)`, counted as the number of singular values above
    /// `1e-12`.
    pub fn degree(&self) -> usize {
        let c = &self.projection * &self.derivative - &self.derivative * &self.projection;
        c.singular_values().iter().filter(|&&s| s > 1e-12).count()
    }

    /// `max |P_n [D, a] P_n - [D_n, P_n a P_n]|` for an ambient operator `a`.
    pub fn derivation_defect(&self, a: &DMatrix<Complex64>) -> Result<f64> {
        let size = self.derivative.nrows();
        if a.nrows() != size || a.ncols() != size {
            return Err(Error::Dimension(format!("{}x{} operand on {size} ambient modes", a.nrows(), a.ncols())));
        }
        let (d, p) = (&self.derivative, &self.projection);
        let lhs = p * (d * a - a * d) * p;
        let (dn, an) = (self.truncated_derivative(), p * a * p);
        let rhs = &dn * &an - &an * &dn;
        Ok(max_entry(&(lhs - rhs)))
    }
}

fn max_entry(a: &DMatrix<Complex64>) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Truncation at `|k| ≤ n` inside `|k| ≤ n + margin`.
pub fn fourier_truncation(n: usize, margin: usize) -> Result<FourierTruncation> {
    if n == 0 {
        return Err(Error::Contract("Fourier truncation needs n >= 1".into()));
    }
    let modes = n + margin;
    let size = 2 * modes + 1;
    let mode = |index: usize| index as i64 - modes as i64;
    let derivative = DMatrix::from_fn(size, size, |r, c| {
        if r == c {
            Complex64::new(mode(r) as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let projection = DMatrix::from_fn(size, size, |r, c| {
        if r == c && mode(r).unsigned_abs() as usize <= n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(FourierTruncation { n, margin, derivative, projection })
}

/// Multiplication by `Σ c_j e^{ijθ}` on modes `|k| ≤ modes`:
/// entry `(k + j, k)` carries `c_j`.
pub fn fourier_multiplier(coefficients: &[(i64, Complex64)], modes: usize) -> DMatrix<Complex64> {
    let size = 2 * modes + 1;
    let mut out = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for col in 0..size {
        for &(j, c) in coefficients {
            let row = col as i64 + j;
            if (0..size as i64).contains(&row) {
                out[(row as usize, col)] += c;
            }
        }
    }
    out
}
