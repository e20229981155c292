use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{max_abs, sample, CircleGrid};
use crate::{Error, Result};

/// Pass threshold for the group checks.
pub const GROUP_CHECK_TOLERANCE: f64 = 1e-10;

/// Circle diffeomorphism `θ ↦ ψ(θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Diffeo {
    /// `ψ(θ) = θ + shift`.
    Rotation { shift: f64 },
    /// `ψ(θ) = θ + amplitude·sin θ`; a diffeomorphism iff `|amplitude| < 1`.
    SinePerturbation { amplitude: f64 },
}

impl Diffeo {
    pub fn identity() -> Self {
        Diffeo::Rotation { shift: 0.0 }
    }

    /// Rotation by `2πk/n`.
    pub fn grid_rotation(k: i64, n: usize) -> Self {
        Diffeo::Rotation { shift: TAU * k as f64 / n as f64 }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Diffeo::Rotation { shift } if shift.is_finite() => Ok(()),
            Diffeo::SinePerturbation { amplitude } if amplitude.is_finite() && amplitude.abs() < 1.0 => Ok(()),
            other => Err(Error::NonInvertible(format!("{other:?} is not an orientation-preserving diffeomorphism"))),
        }
    }

    pub fn forward(&self, theta: f64) -> f64 {
        match *self {
            Diffeo::Rotation { shift } => theta + shift,
            Diffeo::SinePerturbation { amplitude } => theta + amplitude * theta.sin(),
        }
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        match *self {
            Diffeo::Rotation { .. } => 1.0,
            Diffeo::SinePerturbation { amplitude } => 1.0 + amplitude * theta.cos(),
        }
    }

    /// `ψ^{-1}(θ)`, by Newton iteration for the perturbed map.
    pub fn inverse(&self, theta: f64) -> f64 {
        match *self {
            Diffeo::Rotation { shift } => theta - shift,
            Diffeo::SinePerturbation { .. } => {
                let mut x = theta;
                for _ in 0..100 {
                    let step = (self.forward(x) - theta) / self.derivative(x);
                    x -= step;
                    if step.abs() < 1e-16 * (1.0 + x.abs()) {
                        break;
                    }
                }
                x
            }
        }
    }

    /// `J(θ) = (ψ^{-1})'(θ)`.
    pub fn inverse_jacobian(&self, theta: f64) -> f64 {
        1.0 / self.derivative(self.inverse(theta))
    }

    /// Grid shift `k` when `ψ` is a rotation by `2πk/n`.
    pub fn grid_shift(&self, n: usize) -> Option<i64> {
        match *self {
            Diffeo::Rotation { shift } => {
                let k = shift * n as f64 / TAU;
                ((k - k.round()).abs() < 1e-12).then(|| k.round() as i64)
            }
            Diffeo::SinePerturbation { .. } => None,
        }
    }

    /// `ψ̂ f (θ) = J(θ)^{1/2} f(ψ^{-1} θ)`, without the weight if unweighted.
    pub fn push_forward(&self, f: impl Fn(f64) -> f64, weighted: bool, theta: f64) -> f64 {
        let value = f(self.inverse(theta));
        if weighted {
            self.inverse_jacobian(theta).sqrt() * value
        } else {
            value
        }
    }
}

/// Matrix discretization of `f ↦ J^{1/2} f∘ψ^{-1}` on `n` grid points.
#[derive(Clone, Debug)]
pub struct TransferOp {
    pub n: usize,
    pub matrix: DMatrix<f64>,
    pub weighted: bool,
    pub diffeo: Diffeo,
}

/// Periodic cardinal function of trigonometric interpolation on `n` points.
/// For even `n` the Nyquist mode carries half weight.
fn cardinal(n: usize, x: f64) -> f64 {
    let top = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    let mut total = 1.0;
    for k in 1..=top {
        total += 2.0 * (k as f64 * x).cos();
    }
    if n % 2 == 0 {
        total += (0.5 * n as f64 * x).cos();
    }
    total / n as f64
}

/// Grid rotations give the exact permutation matrix; anything else gives
/// the collocation matrix through trigonometric interpolation.
pub fn transfer_matrix(diffeo: Diffeo, n: usize, weighted: bool) -> Result<TransferOp> {
    diffeo.validate()?;
    let grid = CircleGrid::new(n)?;
    let matrix = if let Some(k) = diffeo.grid_shift(n) {
        let k = k.rem_euclid(n as i64) as usize;
        DMatrix::from_fn(n, n, |i, j| if j == (i + n - k) % n { 1.0 } else { 0.0 })
    } else {
        DMatrix::from_fn(n, n, |i, j| {
            let theta = grid.node(i);
            let weight = if weighted { diffeo.inverse_jacobian(theta).sqrt() } else { 1.0 };
            weight * cardinal(n, diffeo.inverse(theta) - grid.node(j))
        })
    };
    Ok(TransferOp { n, matrix, weighted, diffeo })
}

/// `‖ψ̂_n π f - π ψ̂ f‖_∞`.
pub fn transfer_defect(op: &TransferOp, f: impl Fn(f64) -> f64) -> Result<f64> {
    let grid = CircleGrid::new(op.n)?;
    let discrete = &op.matrix * nalgebra::DVector::from_vec(sample(&f, &grid));
    let continuous = sample(|t| op.diffeo.push_forward(&f, op.weighted, t), &grid);
    Ok(max_abs(discrete.iter().zip(&continuous).map(|(a, b)| a - b)))
}

/// Group-membership diagnostics of a transfer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub n: usize,
    pub is_permutation: bool,
    pub condition_number: f64,
    pub invertible: bool,
    /// `max |MᵀM - I|`.
    pub orthogonality_defect: f64,
    pub orthogonal: bool,
    /// `‖M·1 - 1‖_∞`.
    pub stochastic_defect: f64,
    pub stochastic: bool,
}

pub fn transfer_group_checks(op: &TransferOp) -> TransferReport {
    let m = &op.matrix;
    let n = op.n;
    let sv = m.singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition_number = if smallest > 0.0 { largest / smallest } else { f64::INFINITY };
    let gram = m.transpose() * m - DMatrix::identity(n, n);
    let orthogonality_defect = max_abs(gram.iter().copied());
    let stochastic_defect = max_abs(m.row_iter().map(|r| r.sum() - 1.0));
    let is_permutation = m.iter().all(|&v| v == 0.0 || v == 1.0)
        && m.row_iter().all(|r| r.iter().filter(|&&v| v == 1.0).count() == 1)
        && m.column_iter().all(|c| c.iter().filter(|&&v| v == 1.0).count() == 1);
    TransferReport {
        n,
        is_permutation,
        condition_number,
        invertible: condition_number.is_finite() && condition_number < 1.0 / (f64::EPSILON * n as f64),
        orthogonality_defect,
        orthogonal: orthogonality_defect <= GROUP_CHECK_TOLERANCE,
        stochastic_defect,
        stochastic: stochastic_defect <= GROUP_CHECK_TOLERANCE,
    }
}
