//! One-dimensional instances on the circle.
//!
//! The forward-difference Euler operator (consistent but never a
//! derivation), the Fourier truncation of `-i d/dθ` (commutes exactly with
//! its projections), and transfer operators of circle diffeomorphisms.

mod euler;
mod fourier;
mod transfer;

use std::f64::consts::PI;

pub use euler::{consistency_defect, euler_operator, leibniz_defect};
pub use fourier::{fourier_multiplier, fourier_truncation, FourierTruncation};
pub use transfer::{
    transfer_defect, transfer_group_checks, transfer_matrix, Diffeo, TransferOp, TransferReport,
    GROUP_CHECK_TOLERANCE,
};

use crate::{Error, Result};

/// Equispaced nodes `θ_i = 2πi/n` on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Contract(format!("circle grid needs n >= 2, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

/// `(f(θ_0), …, f(θ_{n-1}))`.
pub fn sample(f: impl Fn(f64) -> f64, grid: &CircleGrid) -> Vec<f64> {
    (0..grid.n()).map(|i| f(grid.node(i))).collect()
}

pub(crate) fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_examples() {
        let g = CircleGrid::new(4).unwrap();
        assert_eq!(sample(|_| 1.0, &g), vec![1.0; 4]);
        let s = sample(f64::sin, &g);
        for (got, want) in s.iter().zip([0.0, 1.0, 0.0, -1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(CircleGrid::new(1).is_err());
    }

    #[test]
    fn sampled_sup_norm_approaches_true_sup() {
        let f = |t: f64| t.sin() + t.cos() * t.cos();
        // Dense oracle: maximize on a fine grid, then polish with a local scan.
        let dense = (0..200_000).map(|k| f(2.0 * PI * k as f64 / 200_000.0).abs()).fold(0.0, f64::max);
        let mut previous_gap = f64::INFINITY;
        for n in [8usize, 32, 128, 512] {
            let s = max_abs(sample(f, &CircleGrid::new(n).unwrap()));
            assert!(s <= dense + 1e-12);
            let gap = dense - s;
            assert!(gap <= previous_gap);
            previous_gap = gap;
        }
        assert!(previous_gap < 1e-4);
    }
}
