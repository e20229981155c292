use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::SphereContext;
use crate::numerics::{hermitian_eigenvalues, ComplexMatrix};
use crate::{Error, Result};

/// Largest `m` accepted by the spectrum and matrix-harmonic routines.
pub const MAX_SPECTRUM_DIMENSION: usize = 64;
/// Largest `m` diagonalized as one dense `m² × m²` superoperator by default.
pub const DENSE_SPECTRUM_LIMIT: usize = 32;
/// Bound on couplings between `ad(∂_z)` weight sectors, relative to `β²`.
pub const SECTOR_LEAK_TOLERANCE: f64 = 1e-10;

fn check_dim(a: &ComplexMatrix, m: usize) -> Result<()> {
    if a.rows() != m || a.cols() != m {
        return Err(Error::Dimension(format!("{}x{} operand in dimension {m}", a.rows(), a.cols())));
    }
    Ok(())
}

/// Noncommutative Laplacian `Δ_m(A) = β² Σ_k [∂_k, [∂_k, A]]`.
pub fn nc_laplacian_apply(a: &ComplexMatrix, ctx: &SphereContext) -> Result<ComplexMatrix> {
    let m = ctx.m();
    check_dim(a, m)?;
    let beta = ctx.calibration().betam;
    let mut sum = ComplexMatrix::zeros(m, m);
    for d in ctx.coordinates() {
        sum = &sum + &d.commutator(&d.commutator(a)?)?;
    }
    Ok(sum.scale_real(beta * beta))
}

/// Entry access to the vectorized superoperator.
///
/// With column-major `vec`, `vec(Δ_m A) = L vec(A)` and
/// `L[(i,j),(k,l)] = β² Σ_k (Q[i,k] δ_jl + Q[l,j] δ_ik - 2 P[l,j] P[i,k])`
/// where `P = ∂_k` and `Q = P²`.
struct Superoperator {
    m: usize,
    beta_sq: f64,
    p: Vec<DMatrix<Complex64>>,
    q: Vec<DMatrix<Complex64>>,
}

impl Superoperator {
    fn new(ctx: &SphereContext) -> Self {
        let p: Vec<_> = ctx.coordinates().iter().map(|c| c.as_dmatrix().clone()).collect();
        let q = p.iter().map(|d| d * d).collect();
        let beta = ctx.calibration().betam;
        Self { m: ctx.m(), beta_sq: beta * beta, p, q }
    }

    fn entry(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (p, q) in self.p.iter().zip(&self.q) {
            if j == l {
                total += q[(i, k)];
            }
            if i == k {
                total += q[(l, j)];
            }
            total -= p[(l, j)] * p[(i, k)] * 2.0;
        }
        total * self.beta_sq
    }

    fn pair(&self, r: usize) -> (usize, usize) {
        (r % self.m, r / self.m)
    }

    fn dense(&self) -> ComplexMatrix {
        let n = self.m * self.m;
        ComplexMatrix::from_dmatrix_unchecked(DMatrix::from_fn(n, n, |r, c| self.entry(self.pair(r), self.pair(c))))
    }

    /// Index pairs `(i, j)` with `j - i = mu`.
    fn sector(&self, mu: i64) -> Vec<(usize, usize)> {
        (0..self.m as i64)
            .filter_map(|i| {
                let j = i + mu;
                (0..self.m as i64).contains(&j).then_some((i as usize, j as usize))
            })
            .collect()
    }

    fn sector_block(&self, pairs: &[(usize, usize)]) -> ComplexMatrix {
        let n = pairs.len();
        ComplexMatrix::from_dmatrix_unchecked(DMatrix::from_fn(n, n, |r, c| self.entry(pairs[r], pairs[c])))
    }

    fn leakage(&self) -> f64 {
        let n = self.m * self.m;
        let mut worst: f64 = 0.0;
        for c in 0..n {
            let (k, l) = self.pair(c);
            for r in 0..n {
                let (i, j) = self.pair(r);
                if j as i64 - i as i64 != l as i64 - k as i64 {
                    worst = worst.max(self.entry((i, j), (k, l)).norm());
                }
            }
        }
        worst
    }
}

/// Dense `m² × m²` matrix of `A ↦ Δ_m(A)` on column-major vectorizations.
pub fn nc_laplacian_superoperator(ctx: &SphereContext) -> Result<ComplexMatrix> {
    if ctx.m() > MAX_SPECTRUM_DIMENSION {
        return Err(Error::SizeGuard(format!("m = {} exceeds {MAX_SPECTRUM_DIMENSION}", ctx.m())));
    }
    Ok(Superoperator::new(ctx).dense())
}

/// Largest superoperator entry coupling different `ad(Sz)` weight sectors.
pub fn sector_leakage(ctx: &SphereContext) -> f64 {
    Superoperator::new(ctx).leakage()
}

/// How [`nc_laplacian_spectrum_with`] diagonalizes the superoperator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumMethod {
    /// One dense Hermitian eigenproblem of size `m²`.
    Dense,
    /// One eigenproblem per `ad(Sz)` weight sector `j - i = μ`, after
    /// certifying that inter-sector couplings are below
    /// [`SECTOR_LEAK_TOLERANCE`]` · β²`.
    WeightSectors,
}

/// Sorted eigenvalues of `A ↦ Δ_m(A)`, `m²` of them.
///
/// Dense for `m ≤ 32`, sector-wise above that.
pub fn nc_laplacian_spectrum(ctx: &SphereContext) -> Result<Vec<f64>> {
    let method = if ctx.m() <= DENSE_SPECTRUM_LIMIT { SpectrumMethod::Dense } else { SpectrumMethod::WeightSectors };
    nc_laplacian_spectrum_with(ctx, method)
}

/// Spectrum at dimension `m` with a context built internally. `m = 1` has
/// no calibration and gives the spectrum `{0}` of the zero superoperator.
pub fn nc_laplacian_spectrum_for_dimension(m: usize) -> Result<Vec<f64>> {
    match m {
        0 => Err(Error::Contract("dimension must be at least 1".into())),
        1 => Ok(vec![0.0]),
        _ if m > MAX_SPECTRUM_DIMENSION => Err(Error::SizeGuard(format!("m = {m} exceeds {MAX_SPECTRUM_DIMENSION}"))),
        _ => nc_laplacian_spectrum(&SphereContext::new(m, 1)?),
    }
}

pub fn nc_laplacian_spectrum_with(ctx: &SphereContext, method: SpectrumMethod) -> Result<Vec<f64>> {
    let m = ctx.m();
    if m > MAX_SPECTRUM_DIMENSION {
        return Err(Error::SizeGuard(format!("m = {m} exceeds {MAX_SPECTRUM_DIMENSION}")));
    }
    let sup = Superoperator::new(ctx);
    let mut values = match method {
        SpectrumMethod::Dense => hermitian_eigenvalues(&sup.dense())?,
        SpectrumMethod::WeightSectors => {
            let leak = sup.leakage();
            if leak > SECTOR_LEAK_TOLERANCE * sup.beta_sq {
                return Err(Error::Contract(format!("weight sectors couple with strength {leak:e}")));
            }
            let mut all = Vec::with_capacity(m * m);
            for mu in -(m as i64 - 1)..=(m as i64 - 1) {
                all.extend(hermitian_eigenvalues(&sup.sector_block(&sup.sector(mu)))?);
            }
            all
        }
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalue-sector decomposition used by the matrix harmonics: for each
/// weight `μ`, the pairs `(i, j)` spanning the sector and its block.
pub(crate) fn sector_blocks(ctx: &SphereContext) -> Vec<(i64, Vec<(usize, usize)>, ComplexMatrix)> {
    let sup = Superoperator::new(ctx);
    let m = ctx.m() as i64;
    (-(m - 1)..=(m - 1))
        .map(|mu| {
            let pairs = sup.sector(mu);
            let block = sup.sector_block(&pairs);
            (mu, pairs, block)
        })
        .collect()
}

/// One eigenvalue cluster of the noncommutative Laplacian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumCluster {
    pub ell: u32,
    /// `ℓ(ℓ+1)`.
    pub expected: f64,
    pub mean: f64,
    /// `max - min` within the cluster.
    pub width: f64,
    pub multiplicity: usize,
    /// `max |λ - ℓ(ℓ+1)|` within the cluster.
    pub max_deviation: f64,
}

/// Groups eigenvalues by the nearest `ℓ(ℓ+1)`.
///
/// Returns one row per `ℓ` from 0 to the largest `ℓ` hit; an `ℓ` with no
/// eigenvalue gets multiplicity 0 and NaN statistics.
pub fn spectrum_clusters(eigenvalues: &[f64]) -> Vec<SpectrumCluster> {
    let nearest_ell = |lambda: f64| ((-1.0 + (1.0 + 4.0 * lambda.max(0.0)).sqrt()) / 2.0).round() as u32;
    let max_ell = eigenvalues.iter().map(|&v| nearest_ell(v)).max().unwrap_or(0);
    (0..=max_ell)
        .map(|ell| {
            let expected = (ell * (ell + 1)) as f64;
            let members: Vec<f64> = eigenvalues.iter().copied().filter(|&v| nearest_ell(v) == ell).collect();
            if members.is_empty() {
                return SpectrumCluster {
                    ell,
                    expected,
                    mean: f64::NAN,
                    width: f64::NAN,
                    multiplicity: 0,
                    max_deviation: f64::NAN,
                };
            }
            let lo = members.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = members.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            SpectrumCluster {
                ell,
                expected,
                mean: members.iter().sum::<f64>() / members.len() as f64,
                width: hi - lo,
                multiplicity: members.len(),
                max_deviation: members.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::spectral_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn annihilates_identity_and_scales_tz() {
        let ctx = SphereContext::new(5, 1).unwrap();
        let zero = nc_laplacian_apply(&ComplexMatrix::identity(5), &ctx).unwrap();
        assert!(zero.max_abs() < 1e-12);
        let tz = &ctx.coordinates()[2];
        let out = nc_laplacian_apply(tz, &ctx).unwrap();
        assert!(spectral_norm(&(&out - &tz.scale_real(2.0))) < 1e-8);
        assert!(nc_laplacian_apply(&ComplexMatrix::identity(4), &ctx).is_err());
    }

    #[test]
    fn positive_semidefinite_on_random_hermitian() {
        let m = 8;
        let ctx = SphereContext::new(m, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = ComplexMatrix::from_fn(m, m, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
            .unwrap()
            .hermitian_part();
            let quad = a.normalized_hs_inner(&nc_laplacian_apply(&a, &ctx).unwrap()).unwrap();
            assert!(quad.re >= -1e-12 && quad.im.abs() < 1e-10);
        }
    }

    #[test]
    fn superoperator_matches_apply() {
        let m = 4;
        let ctx = SphereContext::new(m, 1).unwrap();
        let sup = nc_laplacian_superoperator(&ctx).unwrap();
        let a = ComplexMatrix::from_fn(m, m, |i, j| Complex64::new(i as f64 - 0.5 * j as f64, (i * j) as f64)).unwrap();
        let via_apply = nc_laplacian_apply(&a, &ctx).unwrap().vectorize();
        let via_sup = sup.as_dmatrix() * nalgebra::DVector::from_vec(a.vectorize());
        for (u, v) in via_apply.iter().zip(via_sup.iter()) {
            assert!((u - v).norm() < 1e-10);
        }
    }

    #[test]
    fn small_spectra() {
        // m = 2: the 4x4 superoperator is 2·(I - P_trace) with P_trace
        // projecting onto the identity, eigenvalues {0, 2, 2, 2}.
        let ctx = SphereContext::new(2, 1).unwrap();
        let spec = nc_laplacian_spectrum(&ctx).unwrap();
        for (got, want) in spec.iter().zip([0.0, 2.0, 2.0, 2.0]) {
            assert!((got - want).abs() < 1e-10, "{spec:?}");
        }
    }

    #[test]
    fn dense_and_sector_routes_agree() {
        let ctx = SphereContext::new(7, 1).unwrap();
        let dense = nc_laplacian_spectrum_with(&ctx, SpectrumMethod::Dense).unwrap();
        let sectors = nc_laplacian_spectrum_with(&ctx, SpectrumMethod::WeightSectors).unwrap();
        assert!(dense.iter().zip(&sectors).all(|(a, b)| (a - b).abs() < 1e-9));
        assert!(sector_leakage(&ctx) < 1e-12);
    }

    #[test]
    fn cluster_grouping() {
        let clusters = spectrum_clusters(&[0.0, 2.0 - 1e-9, 2.0, 2.0 + 1e-9, 6.0]);
        assert_eq!(clusters.len(), 3);
        assert_eq!(clusters[1].multiplicity, 3);
        assert!((clusters[1].width - 2e-9).abs() < 1e-15);
        assert_eq!(clusters[2].multiplicity, 1);
        let gap = spectrum_clusters(&[0.0, 6.0]);
        assert_eq!(gap[1].multiplicity, 0);
    }
}
