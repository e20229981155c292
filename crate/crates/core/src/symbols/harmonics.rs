use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SphereSymbol;
use crate::numerics::build_quadrature;
use crate::{Error, Result};

/// Degree and order `(ℓ, μ)` of a spherical harmonic, `|μ| ≤ ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    ell: u32,
    mu: i32,
}

impl HarmonicIndex {
    pub fn new(ell: i64, mu: i64) -> Result<Self> {
        if ell < 0 || mu.abs() > ell || ell > i32::MAX as i64 {
            return Err(Error::InvalidIndex { ell, mu });
        }
        Ok(Self { ell: ell as u32, mu: mu as i32 })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn mu(&self) -> i32 {
        self.mu
    }

    /// All indices with `ℓ ≤ max_ell`, ordered by `ℓ` then `μ` ascending.
    pub fn up_to(max_ell: u32) -> impl Iterator<Item = HarmonicIndex> {
        (0..=max_ell).flat_map(|ell| (-(ell as i32)..=ell as i32).map(move |mu| HarmonicIndex { ell, mu }))
    }
}

impl std::fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Y{},{}", self.ell, self.mu)
    }
}

fn l2_normalize(f: &SphereSymbol) -> SphereSymbol {
    let q = build_quadrature((2 * f.degree() as usize).max(1)).expect("degree within quadrature guard");
    let norm_sq = q.integrate(|n| f.eval_node(n).norm_sqr());
    f.scale_real(1.0 / norm_sq.sqrt())
}

/// Complex spherical harmonic `Y_ℓμ` as a reduced polynomial.
///
/// Built from the top harmonic `(-1)^ℓ (x + iy)^ℓ` by repeated lowering
/// `f ↦ i {x - iy, f}`, then normalized to unit `L²(S²)` norm by quadrature.
/// The Condon-Shortley phase follows from the sign of the top harmonic and
/// the positive lowering factors.
///
/// Coefficients grow combinatorially with `ℓ`; for `ℓ` beyond roughly 20
/// prefer [`harmonic_value`] when only point values are needed.
pub fn spherical_harmonic(idx: HarmonicIndex) -> SphereSymbol {
    let ell = idx.ell as i64;
    let raising = SphereSymbol::x().add(&SphereSymbol::y().scale(Complex64::new(0.0, 1.0)));
    let lowering = SphereSymbol::x().sub(&SphereSymbol::y().scale(Complex64::new(0.0, 1.0)));
    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
    let mut f = l2_normalize(&raising.pow(idx.ell).scale_real(sign));
    let i = Complex64::new(0.0, 1.0);
    let mut mu = ell;
    while mu > idx.mu as i64 {
        let factor = (((ell + mu) * (ell - mu + 1)) as f64).sqrt();
        f = lowering.poisson_bracket(&f).scale(i / factor);
        mu -= 1;
    }
    l2_normalize(&f)
}

/// Point value of `Y_ℓμ(θ, φ)` via the normalized associated Legendre
/// recurrence. Independent of the polynomial construction and stable for
/// large `ℓ`.
pub fn harmonic_value(idx: HarmonicIndex, theta: f64, phi: f64) -> Complex64 {
    let ell = idx.ell as usize;
    let m = idx.mu.unsigned_abs() as usize;
    let (sin_t, cos_t) = theta.sin_cos();
    let sin_t = sin_t.abs();

    let mut p_mm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        p_mm *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * sin_t;
    }
    let legendre = if ell == m {
        p_mm
    } else {
        let mut prev = p_mm;
        let mut cur = cos_t * ((2 * m + 3) as f64).sqrt() * p_mm;
        for l in (m + 2)..=ell {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            let next = a * (cos_t * cur - b * prev);
            prev = cur;
            cur = next;
        }
        cur
    };
    let value = Complex64::from_polar(legendre, m as f64 * phi);
    if idx.mu >= 0 {
        value
    } else if m % 2 == 0 {
        value.conj()
    } else {
        -value.conj()
    }
}
