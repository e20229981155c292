use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numerics::ComplexMatrix;
use crate::{Error, Result};

/// Spin-`s` generators in dimension `m = 2s + 1`.
///
/// Basis vector `k` carries weight `s - k`, so `Sz = diag(s, s-1, ..., -s)`
/// and the raising operator is strictly upper triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinFrame {
    pub m: usize,
    pub s: f64,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    pub s_plus: ComplexMatrix,
}

pub fn spin_frame(m: usize) -> Result<SpinFrame> {
    if m == 0 {
        return Err(Error::Contract("spin frame dimension must be at least 1".into()));
    }
    let s = (m as f64 - 1.0) / 2.0;
    let weight = |k: usize| s - k as f64;
    let mut plus = DMatrix::<Complex64>::zeros(m, m);
    for k in 1..m {
        let mu = weight(k);
        plus[(k - 1, k)] = Complex64::new((s * (s + 1.0) - mu * (mu + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let sx = (&plus + &minus) * half;
    let sy = (&plus - &minus) * Complex64::new(0.0, -0.5);
    let sz = DMatrix::from_fn(m, m, |i, j| if i == j { Complex64::new(weight(i), 0.0) } else { Complex64::new(0.0, 0.0) });
    Ok(SpinFrame {
        m,
        s,
        sx: ComplexMatrix::from_dmatrix(sx)?,
        sy: ComplexMatrix::from_dmatrix(sy)?,
        sz: ComplexMatrix::from_dmatrix(sz)?,
        s_plus: ComplexMatrix::from_dmatrix(plus)?,
    })
}

impl SpinFrame {
    pub fn generators(&self) -> [&ComplexMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    /// Largest entry of `[S_a, S_b] - i S_c` over the three cyclic pairs.
    pub fn commutation_defect(&self) -> f64 {
        let i = Complex64::new(0.0, 1.0);
        let [x, y, z] = self.generators();
        [(x, y, z), (y, z, x), (z, x, y)]
            .into_iter()
            .map(|(a, b, c)| (&a.commutator(b).expect("square") - &c.scale(i)).max_abs())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `Sx² + Sy² + Sz² - s(s+1) I`.
    pub fn casimir_defect(&self) -> f64 {
        let casimir = self.generators().iter().fold(ComplexMatrix::zeros(self.m, self.m), |acc, g| &acc + &(*g * *g));
        (&casimir - &ComplexMatrix::identity(self.m).scale_real(self.s * (self.s + 1.0))).max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_representation() {
        let f = spin_frame(1).unwrap();
        for g in f.generators() {
            assert_eq!(g, &ComplexMatrix::zeros(1, 1));
        }
        assert!(spin_frame(0).is_err());
    }

    #[test]
    fn spin_half() {
        let f = spin_frame(2).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        assert_eq!(f.sx, expected);
        assert!(f.commutation_defect() < 1e-15);
    }

    #[test]
    fn casimir_spin_two() {
        let f = spin_frame(5).unwrap();
        assert!(f.casimir_defect() < 1e-13);
        let six = ComplexMatrix::identity(5).scale_real(6.0);
        let casimir = f.generators().iter().fold(ComplexMatrix::zeros(5, 5), |acc, g| &acc + &(*g * *g));
        assert!((&casimir - &six).max_abs() < 1e-13);
    }

    #[test]
    fn sz_diagonal_and_hermitian() {
        let f = spin_frame(6).unwrap();
        for k in 0..6 {
            assert_eq!(f.sz.get(k, k).re, 2.5 - k as f64);
        }
        assert!(f.generators().iter().all(|g| g.is_hermitian()));
    }
}
