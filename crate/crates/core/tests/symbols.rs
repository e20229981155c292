use std::f64::consts::PI;

use ncdisc_core::numerics::build_quadrature;
use ncdisc_core::symbols::{reduce, spherical_harmonic, HarmonicIndex, RawPolynomial, SphereSymbol};
use ncdisc_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn idx(l: i64, mu: i64) -> HarmonicIndex {
    HarmonicIndex::new(l, mu).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Random complex symbol of total degree at most `degree` from explicit
/// coefficients.
fn symbol_strategy(degree: u32) -> impl Strategy<Value = SphereSymbol> {
    let monomials: Vec<[u32; 3]> = (0..=degree)
        .flat_map(|a| (0..=degree - a).flat_map(move |b| (0..=degree - a - b).map(move |cc| [a, b, cc])))
        .collect();
    let n = monomials.len();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |coeffs| {
        reduce(&RawPolynomial::from_terms(
            monomials.iter().zip(coeffs).map(|(&e, (re, im))| (e, Complex64::new(re, im))),
        ))
    })
}

#[test]
fn z_cubed_reduces_pointwise() {
    let raw = RawPolynomial::from_terms([([0, 0, 3], c(1.0))]);
    let reduced = reduce(&raw);
    let expected = reduce(&RawPolynomial::from_terms([
        ([0, 0, 1], c(1.0)),
        ([2, 0, 1], c(-1.0)),
        ([0, 2, 1], c(-1.0)),
    ]));
    assert_eq!(reduced, expected);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let [x, y, z] = random_unit(&mut rng);
        assert!((reduced.eval(x, y, z) - raw.eval(x, y, z)).norm() < 1e-14);
    }
}

#[test]
fn bracket_generates_rotations() {
    let (x, y, z) = (SphereSymbol::x(), SphereSymbol::y(), SphereSymbol::z());
    assert_eq!(x.poisson_bracket(&y), z);
    assert_eq!(y.poisson_bracket(&z), x);
    assert_eq!(z.poisson_bracket(&x), y);
    assert_eq!(z.poisson_bracket(&y), x.scale_real(-1.0));
}

/// Closed-form harmonics with the Condon-Shortley phase.
fn closed_form(l: i64, mu: i64, theta: f64, phi: f64) -> Complex64 {
    let (s, ct) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, mu as f64 * phi);
    let v = match (l, mu) {
        (0, 0) => 0.5 / PI.sqrt(),
        (1, 0) => (3.0 / (4.0 * PI)).sqrt() * ct,
        (1, 1) => -(3.0 / (8.0 * PI)).sqrt() * s,
        (2, 0) => (5.0 / (16.0 * PI)).sqrt() * (3.0 * ct * ct - 1.0),
        (2, 1) => -(15.0 / (8.0 * PI)).sqrt() * s * ct,
        (2, 2) => (15.0 / (32.0 * PI)).sqrt() * s * s,
        (3, 1) => -(21.0 / (64.0 * PI)).sqrt() * s * (5.0 * ct * ct - 1.0),
        (3, -2) => (105.0 / (32.0 * PI)).sqrt() * s * s * ct,
        _ => unreachable!(),
    };
    e * v
}

#[test]
fn harmonics_match_closed_forms() {
    for (l, mu) in [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 1), (3, -2)] {
        let y = spherical_harmonic(idx(l, mu));
        for k in 0..25 {
            let (theta, phi) = (0.07 + 0.12 * k as f64, 0.31 * k as f64);
            let got = y.eval_angles(theta, phi);
            let want = closed_form(l, mu, theta, phi);
            assert!((got - want).norm() < 1e-12, "Y{l},{mu} at ({theta}, {phi}): {got} vs {want}");
        }
    }
}

#[test]
fn gram_matrix_is_identity_up_to_four() {
    let quad = build_quadrature(8).unwrap();
    let harmonics: Vec<_> = HarmonicIndex::up_to(4).map(spherical_harmonic).collect();
    let samples: Vec<Vec<Complex64>> =
        harmonics.iter().map(|y| quad.nodes().iter().map(|n| y.eval_node(n)).collect()).collect();
    for (a, sa) in samples.iter().enumerate() {
        for (b, sb) in samples.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            assert!((quad.inner(sa, sb) - target).norm() <= 1e-10);
        }
    }
}

#[test]
fn laplacian_eigenvalues_through_six() {
    for k in HarmonicIndex::up_to(6) {
        let y = spherical_harmonic(k);
        let ev = (k.ell() * (k.ell() + 1)) as f64;
        assert!(y.laplace_beltrami().sub(&y.scale_real(ev)).coefficient_norm() <= 1e-9, "{k}");
    }
    let y31 = spherical_harmonic(idx(3, 1));
    assert!(y31.laplace_beltrami().sub(&y31.scale_real(12.0)).coefficient_norm() < 1e-12);
}

#[test]
fn bilaplacian_lemma_through_four() {
    for k in HarmonicIndex::up_to(4) {
        let f = spherical_harmonic(k);
        let mut lhs = SphereSymbol::zero();
        for axis in 0..3 {
            let coord = SphereSymbol::coordinate(axis);
            lhs = lhs.add(&coord.poisson_bracket(&coord.poisson_bracket(&f).laplace_beltrami()));
        }
        let rhs = f.laplace_beltrami().laplace_beltrami();
        // Σ {X, Δ{X, f}} = -Δ² f under the positive convention.
        assert!(lhs.add(&rhs).coefficient_norm() <= 1e-9, "{k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn jacobi_identity(f in symbol_strategy(3), g in symbol_strategy(3), h in symbol_strategy(3)) {
        let j = f.poisson_bracket(&g.poisson_bracket(&h))
            .add(&g.poisson_bracket(&h.poisson_bracket(&f)))
            .add(&h.poisson_bracket(&f.poisson_bracket(&g)));
        prop_assert!(j.coefficient_norm() <= 1e-10);
    }

    #[test]
    fn leibniz_rule(f in symbol_strategy(2), g in symbol_strategy(2), h in symbol_strategy(2)) {
        let lhs = f.poisson_bracket(&g.mul(&h));
        let rhs = f.poisson_bracket(&g).mul(&h).add(&g.mul(&f.poisson_bracket(&h)));
        prop_assert!(lhs.sub(&rhs).coefficient_norm() <= 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric(f in symbol_strategy(3), g in symbol_strategy(3)) {
        prop_assert!(f.poisson_bracket(&g).add(&g.poisson_bracket(&f)).coefficient_norm() <= 1e-12);
        prop_assert!(f.poisson_bracket(&f).coefficient_norm() <= 1e-12);
    }

    #[test]
    fn reduction_preserves_values(f in symbol_strategy(4), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [x, y, z] = random_unit(&mut rng);
        let squared = f.mul(&f);
        prop_assert!((squared.eval(x, y, z) - f.eval(x, y, z) * f.eval(x, y, z)).norm() < 1e-10);
        prop_assert!(squared.terms().all(|(e, _)| e[2] <= 1));
    }
}
