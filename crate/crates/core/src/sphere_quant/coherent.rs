use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numerics::{build_quadrature, SphereQuadrature};
use crate::{Error, Result};

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

fn coherent_into(m: usize, theta: f64, phi: f64, ln_fact: &[f64], out: &mut [Complex64]) {
    let n = m - 1;
    let (half_sin, half_cos) = (0.5 * theta).sin_cos();
    let (ln_sin, ln_cos) = (half_sin.abs().ln(), half_cos.abs().ln());
    for (k, slot) in out.iter_mut().enumerate() {
        let cos_power = (n - k) as f64;
        let sin_power = k as f64;
        let mut log_mag = 0.5 * (ln_fact[n] - ln_fact[k] - ln_fact[n - k]);
        if cos_power > 0.0 {
            log_mag += cos_power * ln_cos;
        }
        if sin_power > 0.0 {
            log_mag += sin_power * ln_sin;
        }
        *slot = Complex64::from_polar(log_mag.exp(), k as f64 * phi);
    }
}

/// Spin coherent state `|θ, φ⟩` in dimension `m`.
///
/// Component `k` (weight `s - k`) is
/// `√C(2s, k) cos^(2s-k)(θ/2) (sin(θ/2) e^{iφ})^k`. At `θ = 0` this is the
/// highest-weight basis vector.
pub fn coherent_state(m: usize, theta: f64, phi: f64) -> Result<Vec<Complex64>> {
    if m == 0 {
        return Err(Error::Contract("coherent state dimension must be at least 1".into()));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Contract(format!("colatitude {theta} outside [0, π]")));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    coherent_into(m, theta, phi, &ln_factorials(m - 1), &mut out);
    Ok(out)
}

/// Coherent states at every node of a sphere quadrature.
///
/// Realizes the Toeplitz projection and Berezin symbol through
/// `(m/4π) Σ w |Ω⟩⟨Ω| = I`, which holds exactly once the quadrature
/// integrates degree `2(m-1)` polynomials.
#[derive(Clone, Debug)]
pub struct CoherentFrame {
    m: usize,
    quadrature: SphereQuadrature,
    states: DMatrix<Complex64>,
}

impl CoherentFrame {
    pub fn new(m: usize, exactness: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Contract("coherent frame dimension must be at least 1".into()));
        }
        let required = 2 * (m - 1);
        if exactness < required.max(1) {
            return Err(Error::InsufficientExactness { required: required.max(1), available: exactness });
        }
        let quadrature = build_quadrature(exactness)?;
        let ln_fact = ln_factorials(m - 1);
        let mut states = DMatrix::<Complex64>::zeros(m, quadrature.len());
        let mut buffer = vec![Complex64::new(0.0, 0.0); m];
        for (col, node) in quadrature.nodes().iter().enumerate() {
            coherent_into(m, node.theta, node.phi, &ln_fact, &mut buffer);
            states.column_mut(col).copy_from_slice(&buffer);
        }
        Ok(Self { m, quadrature, states })
    }

    /// Frame whose quadrature suffices for Toeplitz operators of symbols up
    /// to `symbol_degree`: exactness `2(m-1) + symbol_degree + 2`.
    pub fn for_symbol_degree(m: usize, symbol_degree: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Contract("coherent frame dimension must be at least 1".into()));
        }
        Self::new(m, required_exactness(m, symbol_degree))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn quadrature(&self) -> &SphereQuadrature {
        &self.quadrature
    }

    /// `m × N` matrix whose columns are the node states.
    pub fn states(&self) -> &DMatrix<Complex64> {
        &self.states
    }

    pub fn state(&self, node: usize) -> Vec<Complex64> {
        self.states.column(node).iter().copied().collect()
    }

    /// Largest entry of `(m/4π) Σ w |Ω⟩⟨Ω| - I`.
    pub fn identity_defect(&self) -> f64 {
        let scale = self.m as f64 / (4.0 * PI);
        let mut weighted = self.states.clone();
        for (col, node) in self.quadrature.nodes().iter().enumerate() {
            weighted.column_mut(col).scale_mut(scale * node.weight);
        }
        let resolved = weighted * self.states.adjoint();
        let identity = DMatrix::<Complex64>::identity(self.m, self.m);
        (resolved - identity).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Largest `| ‖Ω‖ - 1 |` over the nodes.
    pub fn normalization_defect(&self) -> f64 {
        self.states.column_iter().map(|c| (c.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Quadrature exactness needed for a Toeplitz operator of a degree-`d`
/// symbol in dimension `m`.
pub fn required_exactness(m: usize, symbol_degree: usize) -> usize {
    2 * m.saturating_sub(1) + symbol_degree + 2
}
