use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::laplacian::{sector_blocks, MAX_SPECTRUM_DIMENSION};
use super::SphereContext;
use crate::numerics::{hermitian_eigen, ComplexMatrix};
use crate::symbols::{harmonic_value, HarmonicIndex};
use crate::{Error, Result};

/// Smallest eigenvalue gap inside one weight sector before the joint
/// eigenspaces are declared degenerate.
pub const DEGENERACY_GAP: f64 = 1e-6;

/// Matrix spherical harmonics: the joint eigenbasis of `Δ_m` and `ad(Sz)`.
///
/// `T_ℓμ` lives on the `μ`-th superdiagonal (`j - i = μ`), is normalized to
/// `Tr(T*T)/m = 1` and phased so that `⟨T_ℓμ, T_m(Y_ℓμ)⟩ > 0`.
#[derive(Clone, Debug)]
pub struct MatrixHarmonicBasis {
    m: usize,
    elements: BTreeMap<HarmonicIndex, (f64, ComplexMatrix)>,
}

impl MatrixHarmonicBasis {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, idx: HarmonicIndex) -> Option<&ComplexMatrix> {
        self.elements.get(&idx).map(|(_, t)| t)
    }

    /// Laplacian eigenvalue of `T_ℓμ` as computed in its sector.
    pub fn eigenvalue(&self, idx: HarmonicIndex) -> Option<f64> {
        self.elements.get(&idx).map(|(v, _)| *v)
    }

    /// Mean computed eigenvalue over `μ = -ℓ..=ℓ`.
    pub fn cluster_value(&self, ell: u32) -> Option<f64> {
        let values: Vec<f64> =
            self.elements.range(HarmonicIndex::new(ell as i64, -(ell as i64)).ok()?..).take_while(|(k, _)| k.ell() == ell).map(|(_, (v, _))| *v).collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    }

    /// Elements ordered by `(ℓ, μ)`.
    pub fn iter(&self) -> impl Iterator<Item = (HarmonicIndex, &ComplexMatrix)> {
        self.elements.iter().map(|(k, (_, t))| (*k, t))
    }

    /// `max |⟨T_a, T_b⟩ - δ_ab|` over all pairs.
    pub fn gram_defect(&self) -> f64 {
        let items: Vec<&ComplexMatrix> = self.elements.values().map(|(_, t)| t).collect();
        let mut worst: f64 = 0.0;
        for (a, ta) in items.iter().enumerate() {
            for (b, tb) in items.iter().enumerate().skip(a) {
                let ip = ta.normalized_hs_inner(tb).expect("basis elements share a dimension");
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// Coordinates `⟨T_ℓμ, A⟩` of `A` in the basis.
    pub fn coefficients(&self, a: &ComplexMatrix) -> Result<BTreeMap<HarmonicIndex, Complex64>> {
        self.elements.iter().map(|(k, (_, t))| Ok((*k, t.normalized_hs_inner(a)?))).collect()
    }

    /// `Σ c_ℓμ T_ℓμ`; fails on an index outside the basis.
    pub fn synthesize(&self, coefficients: &BTreeMap<HarmonicIndex, Complex64>) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(self.m, self.m);
        for (idx, c) in coefficients {
            let t = self.element(*idx).ok_or_else(|| {
                Error::Unsupported(format!("{idx} is outside the matrix harmonics of dimension {}", self.m))
            })?;
            out = &out + &t.scale(*c);
        }
        Ok(out)
    }
}

/// Superdiagonal `μ` of `T_m(Y_ℓμ)`, entries `(i, i + μ)`.
///
/// Every coherent component is `r_k(θ) e^{ikφ}` with `r_k ≥ 0`, so the
/// longitude sum collapses and each entry is a colatitude integral of
/// `Y_ℓμ(θ, 0) r_i r_{i+μ}` over the frame's Gauss rings.
fn toeplitz_superdiagonal(idx: HarmonicIndex, ctx: &SphereContext) -> Vec<Complex64> {
    let m = ctx.m();
    let mu = idx.mu().unsigned_abs() as usize;
    let frame = ctx.frame();
    let quad = frame.quadrature();
    let per_ring = quad.phi_nodes().len();
    let scale = m as f64 / (4.0 * PI);
    let mut out = vec![Complex64::new(0.0, 0.0); m - mu];
    for (ring, &theta) in quad.theta_nodes().iter().enumerate() {
        let first = ring * per_ring;
        let ring_weight: f64 = quad.nodes()[first..first + per_ring].iter().map(|n| n.weight).sum();
        let radial = harmonic_value(idx, theta, 0.0) * (scale * ring_weight);
        let state = frame.states().column(first);
        for (i, slot) in out.iter_mut().enumerate() {
            let (row, col) = if idx.mu() >= 0 { (i, i + mu) } else { (i + mu, i) };
            *slot += radial * (state[row].norm() * state[col].norm());
        }
    }
    out
}

/// Joint eigenbasis of the noncommutative Laplacian and `ad(Sz)`.
///
/// Each weight sector `j - i = μ` is diagonalized separately; its
/// eigenvalues, in ascending order, are assigned `ℓ = |μ|, |μ|+1, …, m-1`.
pub fn matrix_harmonics(ctx: &SphereContext) -> Result<MatrixHarmonicBasis> {
    let m = ctx.m();
    if m > MAX_SPECTRUM_DIMENSION {
        return Err(Error::SizeGuard(format!("m = {m} exceeds {MAX_SPECTRUM_DIMENSION}")));
    }
    let mut elements = BTreeMap::new();
    for (mu, pairs, block) in sector_blocks(ctx) {
        let eig = hermitian_eigen(&block)?;
        if let Some(w) = eig.eigenvalues.windows(2).find(|w| w[1] - w[0] < DEGENERACY_GAP) {
            return Err(Error::Degeneracy(format!(
                "sector μ = {mu} has eigenvalues {} and {} closer than {DEGENERACY_GAP:e}",
                w[0], w[1]
            )));
        }
        for (rank, &value) in eig.eigenvalues.iter().enumerate() {
            let idx = HarmonicIndex::new(mu.abs() + rank as i64, mu)?;
            let v = eig.eigenvector(rank);
            let image = toeplitz_superdiagonal(idx, ctx);
            let ip: Complex64 = v.iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
            if ip.norm() < 1e-12 {
                return Err(Error::Degeneracy(format!("{idx} is orthogonal to its Toeplitz image")));
            }
            let phase = ip / ip.norm();
            let norm = (m as f64).sqrt();
            let mut t = nalgebra::DMatrix::<Complex64>::zeros(m, m);
            for (&(i, j), c) in pairs.iter().zip(&v) {
                t[(i, j)] = c * phase * norm;
            }
            elements.insert(idx, (value, ComplexMatrix::from_dmatrix_unchecked(t)));
        }
    }
    Ok(MatrixHarmonicBasis { m, elements })
}
