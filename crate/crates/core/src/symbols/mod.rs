//! Smooth functions on the two-sphere as reduced polynomials.
//!
//! This is the exact continuous side of every sphere diagram: products,
//! Poisson brackets and the Laplace-Beltrami operator act on coefficients,
//! so they carry no discretization error of their own.

mod harmonics;
mod polynomial;

use std::f64::consts::PI;

pub use harmonics::{harmonic_value, spherical_harmonic, HarmonicIndex};
pub use polynomial::{reduce, Exponents, RawPolynomial, SphereSymbol};

use crate::{Error, Result};

/// Smallest latitude resolution accepted by [`sup_norm`].
pub const MIN_SUP_NORM_RESOLUTION: usize = 16;

/// `max |f|` over a latitude-longitude grid that includes both poles.
///
/// The grid has colatitudes `πi/r` for `i = 0..=r` and longitudes `πj/r`
/// for `j < 2r`. Doubling `r` refines the grid in place, so the estimate is
/// nondecreasing along any doubling sequence of resolutions.
pub fn sup_norm(f: &SphereSymbol, resolution: usize) -> Result<f64> {
    if resolution < MIN_SUP_NORM_RESOLUTION {
        return Err(Error::Contract(format!(
            "sup-norm resolution {resolution} is below {MIN_SUP_NORM_RESOLUTION}"
        )));
    }
    let step = PI / resolution as f64;
    let mut best: f64 = 0.0;
    for i in 0..=resolution {
        let theta = i as f64 * step;
        let longitudes = if i == 0 || i == resolution { 1 } else { 2 * resolution };
        for j in 0..longitudes {
            best = best.max(f.eval_angles(theta, j as f64 * step).norm());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn sup_norm_examples() {
        assert!((sup_norm(&SphereSymbol::z(), 16).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sup_norm(&SphereSymbol::zero(), 16).unwrap(), 0.0);
        let f = SphereSymbol::x().add(&SphereSymbol::z());
        assert!((sup_norm(&f, 512).unwrap() - 2f64.sqrt()).abs() < 1e-4);
        assert!(sup_norm(&f, 8).is_err());
    }

    #[test]
    fn sup_norm_monotone_under_doubling() {
        let f = SphereSymbol::x()
            .mul(&SphereSymbol::y())
            .add(&SphereSymbol::z().scale(Complex64::new(0.3, 0.2)));
        let values: Vec<f64> = [16, 32, 64, 128, 256].iter().map(|&r| sup_norm(&f, r).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
    }
}
