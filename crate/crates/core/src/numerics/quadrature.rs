use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::{Error, Result};

/// Largest exactness degree [`build_quadrature`] accepts.
pub const MAX_EXACTNESS_DEGREE: usize = 4096;

/// One node of a product rule on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereNode {
    pub theta: f64,
    pub phi: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub weight: f64,
}

/// Gauss-Legendre (in `cos θ`) times uniform-`φ` product rule.
///
/// Integrates every polynomial in `(x, y, z)` of total degree at most
/// [`SphereQuadrature::exactness`] exactly. Weights sum to `4π`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereQuadrature {
    exactness: usize,
    theta_nodes: Vec<f64>,
    phi_nodes: Vec<f64>,
    nodes: Vec<SphereNode>,
}

/// Builds a product rule exact up to total degree `exactness_degree`.
///
/// Uses `⌈(d+2)/2⌉` Gauss-Legendre points in `cos θ` and `d+1` equispaced
/// longitudes. Nodes are ordered by colatitude, then longitude.
pub fn build_quadrature(exactness_degree: usize) -> Result<SphereQuadrature> {
    if exactness_degree == 0 {
        return Err(Error::Contract("quadrature exactness degree must be at least 1".into()));
    }
    if exactness_degree > MAX_EXACTNESS_DEGREE {
        return Err(Error::SizeGuard(format!(
            "quadrature exactness {exactness_degree} exceeds {MAX_EXACTNESS_DEGREE}"
        )));
    }
    let n_theta = (exactness_degree + 3) / 2;
    let n_phi = exactness_degree + 1;

    let rule = GaussLegendre::new(NonZeroUsize::new(n_theta).expect("n_theta >= 2"));
    let mut pairs: Vec<(f64, f64)> = rule.iter().map(|&(x, w)| (x, w)).collect();
    // Descending cos θ, i.e. ascending colatitude.
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let dphi = 2.0 * PI / n_phi as f64;
    let phi_nodes: Vec<f64> = (0..n_phi).map(|j| j as f64 * dphi).collect();
    let theta_nodes: Vec<f64> = pairs.iter().map(|&(c, _)| c.clamp(-1.0, 1.0).acos()).collect();

    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for (&(cos_t, w_t), &theta) in pairs.iter().zip(&theta_nodes) {
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        for &phi in &phi_nodes {
            nodes.push(SphereNode {
                theta,
                phi,
                x: sin_t * phi.cos(),
                y: sin_t * phi.sin(),
                z: cos_t,
                weight: w_t * dphi,
            });
        }
    }
    Ok(SphereQuadrature { exactness: exactness_degree, theta_nodes, phi_nodes, nodes })
}

impl SphereQuadrature {
    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta_nodes
    }

    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi_nodes
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(&SphereNode) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n)).sum()
    }

    pub fn integrate_complex(&self, mut f: impl FnMut(&SphereNode) -> Complex64) -> Complex64 {
        self.nodes.iter().map(|n| f(n) * n.weight).sum()
    }

    /// Weighted inner product `Σ w conj(a) b` of two sampled functions.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        self.nodes.iter().zip(a.iter().zip(b)).map(|(n, (u, v))| u.conj() * v * n.weight).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson in θ over a periodic trapezoid in φ; independent of
    /// the Gauss-Legendre construction.
    fn simpson_sphere(f: impl Fn(f64, f64) -> f64, n_theta: usize, n_phi: usize) -> f64 {
        let h = PI / n_theta as f64;
        let dphi = 2.0 * PI / n_phi as f64;
        let mut total = 0.0;
        for i in 0..=n_theta {
            let theta = i as f64 * h;
            let coef = if i == 0 || i == n_theta { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let ring: f64 = (0..n_phi).map(|j| f(theta, j as f64 * dphi)).sum::<f64>() * dphi;
            total += coef * ring * theta.sin();
        }
        total * h / 3.0
    }

    #[test]
    fn degree_two_examples() {
        let q = build_quadrature(2).unwrap();
        assert!((q.weight_sum() - 4.0 * PI).abs() <= 1e-12 * 4.0 * PI);
        let y10 = (3.0 / (4.0 * PI)).sqrt();
        assert!(q.integrate(|n| y10 * n.z).abs() <= 1e-12);
        assert!(q.nodes().iter().all(|n| n.theta > 0.0 && n.theta < PI));
    }

    #[test]
    fn point_counts() {
        for d in [1, 2, 7, 8, 100] {
            let q = build_quadrature(d).unwrap();
            assert!(q.theta_nodes().len() >= (d + 2).div_ceil(2));
            assert!(q.phi_nodes().len() > d);
        }
    }

    #[test]
    fn y42_is_normalized() {
        let y42_sq = |theta: f64, _phi: f64| {
            let (s, c) = theta.sin_cos();
            let v = 3.0 / 8.0 * (5.0 / (2.0 * PI)).sqrt() * s * s * (7.0 * c * c - 1.0);
            v * v
        };
        let oracle = simpson_sphere(y42_sq, 4000, 8);
        assert!((oracle - 1.0).abs() < 1e-12, "oracle {oracle}");
        let q = build_quadrature(8).unwrap();
        let got = q.integrate(|n| y42_sq(n.theta, n.phi));
        assert!((got - 1.0).abs() < 1e-10, "got {got}");
    }

    #[test]
    fn monomials_integrate_exactly() {
        // ∫ x^a y^b z^c dΩ = 2 Γ((a+1)/2)Γ((b+1)/2)Γ((c+1)/2)/Γ((a+b+c+3)/2), all even.
        fn double_factorial(k: i64) -> f64 {
            (1..=k).rev().step_by(2).map(|v| v as f64).product()
        }
        let exact = |a: i64, b: i64, c: i64| -> f64 {
            if a % 2 == 1 || b % 2 == 1 || c % 2 == 1 {
                return 0.0;
            }
            4.0 * PI * double_factorial(a - 1) * double_factorial(b - 1) * double_factorial(c - 1)
                / double_factorial(a + b + c + 1)
        };
        let d = 9;
        let q = build_quadrature(d).unwrap();
        for a in 0..=d as i64 {
            for b in 0..=(d as i64 - a) {
                for c in 0..=(d as i64 - a - b) {
                    let got = q.integrate(|n| n.x.powi(a as i32) * n.y.powi(b as i32) * n.z.powi(c as i32));
                    assert!((got - exact(a, b, c)).abs() < 1e-13, "({a},{b},{c}) {got}");
                }
            }
        }
    }

    #[test]
    fn guards() {
        assert!(build_quadrature(0).is_err());
        assert!(matches!(build_quadrature(4097), Err(Error::SizeGuard(_))));
    }
}
