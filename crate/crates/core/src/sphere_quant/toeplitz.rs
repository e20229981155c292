use std::f64::consts::PI;

use num_complex::Complex64;

use super::coherent::required_exactness;
use super::CoherentFrame;
use crate::numerics::ComplexMatrix;
use crate::symbols::SphereSymbol;
use crate::{Error, Result};

fn check_exactness(frame: &CoherentFrame, symbol_degree: usize) -> Result<()> {
    let required = required_exactness(frame.m(), symbol_degree);
    let available = frame.quadrature().exactness();
    if available < required {
        return Err(Error::InsufficientExactness { required, available });
    }
    Ok(())
}

/// Toeplitz operator `T_m(f) = (m/4π) Σ w f(node) |Ω⟩⟨Ω|`.
///
/// Fails when the frame quadrature cannot integrate `f |Ω⟩⟨Ω|` exactly,
/// which would otherwise alias silently. Real symbols give Hermitian output.
pub fn toeplitz(f: &SphereSymbol, frame: &CoherentFrame) -> Result<ComplexMatrix> {
    let values: Vec<Complex64> = frame.quadrature().nodes().iter().map(|n| f.eval_node(n)).collect();
    toeplitz_sampled(&values, f.degree() as usize, f.is_real(), frame)
}

/// Toeplitz operator of a symbol given by its values at the frame nodes.
///
/// `symbol_degree` is the polynomial degree of the sampled function and is
/// checked against the frame exactness exactly as in [`toeplitz`].
pub fn toeplitz_sampled(
    values: &[Complex64],
    symbol_degree: usize,
    real_valued: bool,
    frame: &CoherentFrame,
) -> Result<ComplexMatrix> {
    check_exactness(frame, symbol_degree)?;
    let nodes = frame.quadrature().nodes();
    if values.len() != nodes.len() {
        return Err(Error::Dimension(format!("{} samples for {} nodes", values.len(), nodes.len())));
    }
    // T(1) = I exactly, so the mean is mapped to a multiple of I and only
    // the remainder goes through the quadrature.
    let mean: Complex64 = nodes.iter().zip(values).map(|(n, v)| v * n.weight).sum::<Complex64>() / (4.0 * PI);
    let scale = frame.m() as f64 / (4.0 * PI);
    let states = frame.states();
    let mut weighted = states.clone();
    for (col, (node, value)) in nodes.iter().zip(values).enumerate() {
        let factor = (*value - mean) * (scale * node.weight);
        weighted.column_mut(col).iter_mut().for_each(|z| *z *= factor);
    }
    let mut product = weighted * states.adjoint();
    for i in 0..frame.m() {
        product[(i, i)] += mean;
    }
    let t = ComplexMatrix::from_dmatrix(product)?;
    Ok(if real_valued { t.hermitian_part() } else { t })
}

/// Covariant Berezin symbol: `⟨Ω|A|Ω⟩` at every frame node.
pub fn berezin_symbol(a: &ComplexMatrix, frame: &CoherentFrame) -> Result<Vec<Complex64>> {
    let m = frame.m();
    if a.rows() != m || a.cols() != m {
        return Err(Error::Dimension(format!(
            "Berezin symbol of a {}x{} matrix in dimension {m}",
            a.rows(),
            a.cols()
        )));
    }
    let states = frame.states();
    let applied = a.as_dmatrix() * states;
    Ok(states
        .column_iter()
        .zip(applied.column_iter())
        .map(|(omega, a_omega)| omega.iter().zip(a_omega.iter()).map(|(u, v)| u.conj() * v).sum())
        .collect())
}
