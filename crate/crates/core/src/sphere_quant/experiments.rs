use num_complex::Complex64;
use serde::Serialize;

use super::{berezin_symbol, nc_laplacian_apply, quantized_bracket, toeplitz, toeplitz_sampled, SphereContext};
use crate::numerics::{singular_values, spectral_norm, ComplexMatrix};
use crate::symbols::{harmonic_value, spherical_harmonic, sup_norm, HarmonicIndex, SphereSymbol};
use crate::{Error, Result};

/// Latitude resolution used for `‖f‖_∞` in the norm experiments.
pub const NORM_SUP_RESOLUTION: usize = 512;
/// Largest `ℓ` for which harmonics go through the exact polynomial route;
/// higher `ℓ` are sampled from the Legendre recurrence.
pub const POLYNOMIAL_HARMONIC_LIMIT: u32 = 12;
/// Allowed spread of the Berezin eigenvalue across `μ`.
pub const BEREZIN_SPREAD_TOLERANCE: f64 = 1e-9;

fn check_ell(ell: u32, ctx: &SphereContext) -> Result<()> {
    if ell as usize > ctx.m() - 1 {
        return Err(Error::InvalidIndex { ell: ell as i64, mu: 0 });
    }
    Ok(())
}

/// Values of `Y_ℓμ` at the frame nodes.
pub fn harmonic_samples(idx: HarmonicIndex, ctx: &SphereContext) -> Vec<Complex64> {
    let nodes = ctx.frame().quadrature().nodes();
    if idx.ell() <= POLYNOMIAL_HARMONIC_LIMIT {
        let y = spherical_harmonic(idx);
        nodes.iter().map(|n| y.eval_node(n)).collect()
    } else {
        nodes.iter().map(|n| harmonic_value(idx, n.theta, n.phi)).collect()
    }
}

/// `T_m(Y_ℓμ)`.
pub fn toeplitz_harmonic(idx: HarmonicIndex, ctx: &SphereContext) -> Result<ComplexMatrix> {
    ctx.require_degree(idx.ell() as usize)?;
    toeplitz_sampled(&harmonic_samples(idx, ctx), idx.ell() as usize, idx.mu() == 0, ctx.frame())
}

/// `‖ quantized_bracket(T f, T g) - T({f, g}) ‖`.
pub fn bms_defect(f: &SphereSymbol, g: &SphereSymbol, ctx: &SphereContext) -> Result<f64> {
    let bracket = f.poisson_bracket(g);
    ctx.require_degree(f.degree().max(g.degree()).max(bracket.degree()) as usize)?;
    let frame = ctx.frame();
    let (tf, tg, tb) = (toeplitz(f, frame)?, toeplitz(g, frame)?, toeplitz(&bracket, frame)?);
    Ok(spectral_norm(&(&quantized_bracket(&tf, &tg, ctx.calibration())? - &tb)))
}

/// Both sides of the norm estimate `‖f‖_∞ - C/m ≤ ‖T_m f‖ ≤ ‖f‖_∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormDefect {
    pub toeplitz_norm: f64,
    pub sup_norm: f64,
}

impl NormDefect {
    /// `‖f‖_∞ - ‖T_m f‖`.
    pub fn gap(&self) -> f64 {
        self.sup_norm - self.toeplitz_norm
    }
}

pub fn norm_defect(f: &SphereSymbol, ctx: &SphereContext) -> Result<NormDefect> {
    ctx.require_degree(f.degree() as usize)?;
    Ok(NormDefect {
        toeplitz_norm: spectral_norm(&toeplitz(f, ctx.frame())?),
        sup_norm: sup_norm(f, NORM_SUP_RESOLUTION)?,
    })
}

/// Max-node `|f - σ_m(T_m f)|`.
pub fn section_defect(f: &SphereSymbol, ctx: &SphereContext) -> Result<f64> {
    ctx.require_degree(f.degree() as usize)?;
    let frame = ctx.frame();
    let back = berezin_symbol(&toeplitz(f, frame)?, frame)?;
    Ok(frame.quadrature().nodes().iter().zip(&back).map(|(n, b)| (f.eval_node(n) - b).norm()).fold(0.0, f64::max))
}

/// Eigenvalue of the Berezin transform `σ_m ∘ T_m` on degree-`ℓ` harmonics.
///
/// Measured separately for every `μ`; the spread across `μ` and the
/// residual of `σ(T Y) = λ Y` are both bounded by
/// [`BEREZIN_SPREAD_TOLERANCE`].
pub fn berezin_transform_eigenvalue(ell: u32, ctx: &SphereContext) -> Result<f64> {
    check_ell(ell, ctx)?;
    let quad = ctx.frame().quadrature();
    let mut values = Vec::with_capacity(2 * ell as usize + 1);
    for mu in -(ell as i64)..=(ell as i64) {
        let idx = HarmonicIndex::new(ell as i64, mu)?;
        let y = harmonic_samples(idx, ctx);
        let back = berezin_symbol(&toeplitz_harmonic(idx, ctx)?, ctx.frame())?;
        let lambda = (quad.inner(&y, &back) / quad.inner(&y, &y)).re;
        let scale = y.iter().fold(0.0_f64, |a, v| a.max(v.norm()));
        let residual = y.iter().zip(&back).map(|(u, b)| (b - u * lambda).norm()).fold(0.0, f64::max);
        if residual > BEREZIN_SPREAD_TOLERANCE * scale {
            return Err(Error::Contract(format!("{idx} is not a Berezin eigenfunction (residual {residual:e})")));
        }
        values.push(lambda);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > BEREZIN_SPREAD_TOLERANCE {
        return Err(Error::Contract(format!("Berezin eigenvalue spread {:e} across μ at ℓ = {ell}", hi - lo)));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Max-node `|Δ Y_ℓμ - σ_m(Δ_m T_m Y_ℓμ)|`.
pub fn laplacian_convergence_defect(idx: HarmonicIndex, ctx: &SphereContext) -> Result<f64> {
    check_ell(idx.ell(), ctx)?;
    let frame = ctx.frame();
    let nodes = frame.quadrature().nodes();
    let continuous: Vec<Complex64> = if idx.ell() <= POLYNOMIAL_HARMONIC_LIMIT {
        let lap = spherical_harmonic(idx).laplace_beltrami();
        nodes.iter().map(|n| lap.eval_node(n)).collect()
    } else {
        let ev = (idx.ell() * (idx.ell() + 1)) as f64;
        nodes.iter().map(|n| harmonic_value(idx, n.theta, n.phi) * ev).collect()
    };
    let discrete = berezin_symbol(&nc_laplacian_apply(&toeplitz_harmonic(idx, ctx)?, ctx)?, frame)?;
    Ok(continuous.iter().zip(&discrete).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

/// Smallest singular value of the Gram matrix of `{T_m(Y_ℓμ) : ℓ ≤ m-1}`
/// under `Tr(A*B)/m`.
pub fn toeplitz_gram_min_singular(ctx: &SphereContext) -> Result<f64> {
    let m = ctx.m();
    let images: Vec<ComplexMatrix> =
        HarmonicIndex::up_to(m as u32 - 1).map(|idx| toeplitz_harmonic(idx, ctx)).collect::<Result<_>>()?;
    let n = images.len();
    let gram = ComplexMatrix::from_fn(n, n, |a, b| {
        images[a].normalized_hs_inner(&images[b]).expect("images share a dimension")
    })?;
    Ok(singular_values(&gram).last().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_quant::coherent_state;
    use std::f64::consts::PI;

    fn idx(l: i64, mu: i64) -> HarmonicIndex {
        HarmonicIndex::new(l, mu).unwrap()
    }

    #[test]
    fn bms_examples() {
        let ctx = SphereContext::new(8, 2).unwrap();
        assert!(bms_defect(&SphereSymbol::x(), &SphereSymbol::y(), &ctx).unwrap() <= 1e-10);
        let f = spherical_harmonic(idx(2, 1));
        assert_eq!(bms_defect(&f, &f, &ctx).unwrap(), 0.0);
        let g = spherical_harmonic(idx(3, -2));
        assert!(matches!(bms_defect(&f, &g, &ctx), Err(Error::InsufficientExactness { .. })));
    }

    #[test]
    fn norm_examples() {
        let ctx = SphereContext::new(8, 1).unwrap();
        let one = norm_defect(&SphereSymbol::one(), &ctx).unwrap();
        assert!((one.toeplitz_norm - 1.0).abs() < 1e-10 && (one.sup_norm - 1.0).abs() < 1e-12);
        let z = norm_defect(&SphereSymbol::z(), &ctx).unwrap();
        let cal = ctx.calibration();
        assert!((z.toeplitz_norm - cal.cm * 3.5).abs() < 1e-10);
        assert!(z.gap() > 0.0);
    }

    #[test]
    fn berezin_eigenvalue_examples() {
        let ctx = SphereContext::new(2, 1).unwrap();
        assert!((berezin_transform_eigenvalue(0, &ctx).unwrap() - 1.0).abs() < 1e-12);
        // Brute force: σ(T(z)) at the north pole, via a midpoint rule on
        // |⟨Ω(0)|Ω(θ,φ)⟩|² cos θ, which is azimuthally symmetric.
        let n = 4000;
        let north = coherent_state(2, 0.0, 0.0).unwrap();
        let mut integral = 0.0;
        for k in 0..n {
            let theta = (k as f64 + 0.5) * PI / n as f64;
            let s = coherent_state(2, theta, 0.0).unwrap();
            let overlap = (north[0].conj() * s[0] + north[1].conj() * s[1]).norm_sqr();
            integral += overlap * theta.cos() * theta.sin() * (PI / n as f64) * 2.0 * PI;
        }
        let brute = 2.0 / (4.0 * PI) * integral;
        let lambda = berezin_transform_eigenvalue(1, &ctx).unwrap();
        assert!((lambda - brute).abs() < 1e-6, "{lambda} vs {brute}");
        assert!(lambda > 0.0 && lambda <= 1.0);
        assert!(matches!(berezin_transform_eigenvalue(2, &ctx), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn laplacian_defect_vanishes_on_constants() {
        let ctx = SphereContext::new(8, 3).unwrap();
        assert!(laplacian_convergence_defect(idx(0, 0), &ctx).unwrap() < 1e-10);
    }

    #[test]
    fn toeplitz_images_span() {
        let ctx = SphereContext::new(4, 3).unwrap();
        assert!(toeplitz_gram_min_singular(&ctx).unwrap() > 1e-8);
    }
}
