use std::collections::BTreeMap;

use num_complex::Complex64;

use super::MatrixHarmonicBasis;
use crate::numerics::ComplexMatrix;
use crate::symbols::HarmonicIndex;
use crate::{Error, Result};

/// `exp(-t Δ_m)` applied to `Σ c_ℓμ T_ℓμ`.
///
/// Each coefficient is damped by `exp(-t λ_ℓ)` with `λ_ℓ` the computed
/// cluster value of the basis, so every `μ` at a given `ℓ` decays alike.
pub fn heat_evolve(
    initial: &BTreeMap<HarmonicIndex, Complex64>,
    basis: &MatrixHarmonicBasis,
    t: f64,
) -> Result<ComplexMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Contract(format!("heat time must be finite and nonnegative, got {t}")));
    }
    let mut damped = BTreeMap::new();
    for (idx, c) in initial {
        let lambda = basis
            .cluster_value(idx.ell())
            .filter(|_| basis.element(*idx).is_some())
            .ok_or_else(|| Error::Unsupported(format!("{idx} needs ℓ ≤ {}", basis.m() - 1)))?;
        damped.insert(*idx, c * (-t * lambda).exp());
    }
    basis.synthesize(&damped)
}
