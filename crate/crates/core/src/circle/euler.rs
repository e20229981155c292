use nalgebra::{DMatrix, DVector};

use super::{max_abs, sample, CircleGrid};
use crate::Result;

/// `E_n = (n/2π)(S - I)` with `(S y)_i = y_{i+1 mod n}`.
///
/// A forward difference, so `E_n π f → π f'` at first order.
pub fn euler_operator(n: usize) -> Result<DMatrix<f64>> {
    let grid = CircleGrid::new(n)?;
    let h_inv = 1.0 / grid.spacing();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if j == i {
            -h_inv
        } else if j == (i + 1) % n {
            h_inv
        } else {
            0.0
        }
    }))
}

fn apply(e: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (e * DVector::from_column_slice(v)).iter().copied().collect()
}

/// `‖E_n π f - π f'‖_∞`.
pub fn consistency_defect(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    let grid = CircleGrid::new(n)?;
    let lhs = apply(&euler_operator(n)?, &sample(&f, &grid));
    Ok(max_abs(lhs.iter().zip(sample(&df, &grid)).map(|(a, b)| a - b)))
}

/// `‖E_n(πf ⊙ πg) - E_n(πf) ⊙ πg - πf ⊙ E_n(πg)‖_∞`.
pub fn leibniz_defect(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    let grid = CircleGrid::new(n)?;
    let e = euler_operator(n)?;
    let (pf, pg) = (sample(&f, &grid), sample(&g, &grid));
    let product: Vec<f64> = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    let (ep, ef, eg) = (apply(&e, &product), apply(&e, &pf), apply(&e, &pg));
    Ok(max_abs((0..n).map(|i| ep[i] - ef[i] * pg[i] - pf[i] * eg[i])))
}
