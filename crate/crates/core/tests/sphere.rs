use std::f64::consts::PI;

use ncdisc_core::numerics::{hermitian_eigenvalues, spectral_norm, ComplexMatrix};
use ncdisc_core::sphere_quant::{
    berezin_symbol, berezin_transform_eigenvalue, bms_defect, calibrate, coherent_state, matrix_harmonics,
    nc_laplacian_apply, nc_laplacian_spectrum, nc_laplacian_spectrum_for_dimension, nc_laplacian_superoperator,
    norm_defect, quantized_bracket, section_defect, spectrum_clusters, spin_frame, toeplitz,
    toeplitz_gram_min_singular, toeplitz_harmonic, CoherentFrame, SphereContext,
};
use ncdisc_core::symbols::{spherical_harmonic, HarmonicIndex, SphereSymbol};
use ncdisc_core::Complex64;
use proptest::prelude::*;

fn idx(l: i64, mu: i64) -> HarmonicIndex {
    HarmonicIndex::new(l, mu).unwrap()
}

/// `Π_{j=1}^{ℓ} (m-j)/(m+j)`: Berezin eigenvalue from the SU(2) overlap
/// `|⟨Ω|Ω'⟩|² = ((1 + n·n')/2)^(m-1)` expanded in Legendre polynomials.
fn berezin_closed_form(ell: u32, m: usize) -> f64 {
    (1..=ell as usize).map(|j| (m - j) as f64 / (m + j) as f64).product()
}

#[test]
fn spin_algebra_through_64() {
    for m in 1..=64usize {
        let f = spin_frame(m).unwrap();
        assert!(f.commutation_defect() <= 1e-12 * m as f64);
        assert!(f.casimir_defect() <= 1e-12 * m as f64);
    }
    let f2 = spin_frame(2).unwrap();
    assert_eq!(f2.sx, ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap());
    let f5 = spin_frame(5).unwrap();
    let casimir = &(&(&f5.sx * &f5.sx) + &(&f5.sy * &f5.sy)) + &(&f5.sz * &f5.sz);
    assert!((&casimir - &ComplexMatrix::identity(5).scale_real(6.0)).max_abs() < 1e-13);
}

#[test]
fn calibration_constants_have_closed_forms() {
    // c_m = 2/(m+1) and β_m = (m+1)/2 with negative sign, from the
    // coherent-state moment ∫ cos θ |Ω_k|² = 2(s-k)/((m+1)) · 4π/m.
    for m in [2usize, 3, 8, 17, 32] {
        let frame = CoherentFrame::for_symbol_degree(m, 1).unwrap();
        let cal = calibrate(m, &frame).unwrap();
        assert!((cal.cm - 2.0 / (m as f64 + 1.0)).abs() < 1e-12);
        assert!((cal.betam - (m as f64 + 1.0) / 2.0).abs() < 1e-9);
        assert_eq!(cal.sign, -1.0);
        assert!(cal.cm * (m as f64 - 1.0) / 2.0 <= 1.0);
    }
}

#[test]
fn calibration_sign_is_cyclic() {
    let m = 6;
    let frame = CoherentFrame::for_symbol_degree(m, 1).unwrap();
    let cal = calibrate(m, &frame).unwrap();
    let t: Vec<_> = (0..3).map(|a| toeplitz(&SphereSymbol::coordinate(a), &frame).unwrap()).collect();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let alpha = (&t[a].commutator(&t[b]).unwrap().scale(Complex64::new(0.0, 1.0)))
            .normalized_hs_inner(&t[c])
            .unwrap()
            .re;
        assert_eq!(alpha.signum(), cal.sign);
        assert!(spectral_norm(&(&quantized_bracket(&t[a], &t[b], &cal).unwrap() - &t[c])) <= 1e-10);
    }
}

#[test]
fn resolution_of_identity() {
    for m in [2usize, 8, 32] {
        let frame = CoherentFrame::new(m, 2 * (m - 1) + 4).unwrap();
        assert!(frame.identity_defect() <= 1e-10);
        assert!(frame.normalization_defect() <= 1e-12);
    }
}

#[test]
fn berezin_eigenvalues_match_closed_form() {
    for m in [2usize, 5, 8, 16] {
        let ctx = SphereContext::new(m, 3.min(m - 1)).unwrap();
        for ell in 0..=3.min(m as u32 - 1) {
            let lambda = berezin_transform_eigenvalue(ell, &ctx).unwrap();
            assert!((lambda - berezin_closed_form(ell, m)).abs() < 1e-11, "m={m} ℓ={ell}");
        }
    }
}

#[test]
fn toeplitz_of_harmonics_vanishes_above_band() {
    // T_m(Y_ℓμ) = 0 for ℓ ≥ m: the span of |Ω⟩⟨Ω| holds only ℓ ≤ m-1.
    let ctx = SphereContext::new(3, 5).unwrap();
    for mu in -3..=3 {
        assert!(toeplitz_harmonic(idx(3, mu), &ctx).unwrap().max_abs() < 1e-14);
    }
}

#[test]
fn coherent_expectations_at_random_points() {
    let mut seed = 17u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for m in [2usize, 5, 10] {
        let s = (m as f64 - 1.0) / 2.0;
        let sz = spin_frame(m).unwrap().sz;
        for _ in 0..10 {
            let (theta, phi) = (PI * next(), 2.0 * PI * next());
            let v = coherent_state(m, theta, phi).unwrap();
            let e: Complex64 = (0..m).map(|k| v[k].conj() * sz.get(k, k) * v[k]).sum();
            assert!((e.re - s * theta.cos()).abs() < 1e-12);
        }
    }
}

#[test]
fn laplacian_kernel_is_identity_span() {
    let ctx = SphereContext::new(8, 1).unwrap();
    let sup = nc_laplacian_superoperator(&ctx).unwrap();
    let values = hermitian_eigenvalues(&sup).unwrap();
    assert!(values[0] >= -1e-8);
    assert_eq!(values.iter().filter(|v| v.abs() < 1e-8).count(), 1);
    let out = nc_laplacian_apply(&ComplexMatrix::identity(8), &ctx).unwrap();
    assert!(out.max_abs() < 1e-12);
}

#[test]
fn spectrum_examples() {
    assert_eq!(nc_laplacian_spectrum_for_dimension(1).unwrap(), vec![0.0]);
    let spec2 = nc_laplacian_spectrum_for_dimension(2).unwrap();
    for (got, want) in spec2.iter().zip([0.0, 2.0, 2.0, 2.0]) {
        assert!((got - want).abs() < 1e-10);
    }
    assert!(nc_laplacian_spectrum_for_dimension(65).is_err());
    let ctx = SphereContext::new(16, 1).unwrap();
    let clusters = spectrum_clusters(&nc_laplacian_spectrum(&ctx).unwrap());
    assert_eq!(clusters.len(), 16);
    for c in clusters {
        assert_eq!(c.multiplicity, 2 * c.ell as usize + 1);
        assert!(c.max_deviation <= 1e-6);
    }
}

#[test]
fn matrix_harmonics_are_complete_at_m8() {
    let ctx = SphereContext::new(8, 7).unwrap();
    let basis = matrix_harmonics(&ctx).unwrap();
    assert_eq!(basis.len(), 64);
    assert!(basis.gram_defect() <= 1e-10);
    let sz = spin_frame(8).unwrap().sz;
    for (k, t) in basis.iter() {
        let ad = &sz.commutator(t).unwrap() - &t.scale_real(k.mu() as f64);
        assert!(ad.max_abs() < 1e-12, "{k}");
    }
}

#[test]
fn toeplitz_images_are_complete() {
    for m in [4usize, 8] {
        let ctx = SphereContext::new(m, m - 1).unwrap();
        assert!(toeplitz_gram_min_singular(&ctx).unwrap() > 1e-8);
    }
}

#[test]
fn section_gap_decreases() {
    for ell in 0..=4i64 {
        for mu in [-ell, 0, ell] {
            let f = spherical_harmonic(idx(ell, mu));
            let gaps: Vec<f64> = [8usize, 16, 32]
                .iter()
                .map(|&m| section_defect(&f, &SphereContext::new(m, ell.max(1) as usize).unwrap()).unwrap())
                .collect();
            if ell == 0 {
                assert!(gaps.iter().all(|&g| g < 1e-12));
            } else {
                assert!(gaps.windows(2).all(|w| w[1] < w[0]), "Y{ell},{mu}: {gaps:?}");
            }
        }
    }
}

#[test]
fn norm_bound_and_gap_trend() {
    for k in [idx(1, 0), idx(2, 0), idx(2, 2), idx(3, 1)] {
        let f = spherical_harmonic(k);
        let mut previous = f64::INFINITY;
        for m in [8usize, 16, 32] {
            let nd = norm_defect(&f, &SphereContext::new(m, k.ell() as usize).unwrap()).unwrap();
            assert!(nd.toeplitz_norm <= nd.sup_norm + 1e-8);
            assert!(nd.gap() < previous);
            previous = nd.gap();
        }
    }
}

#[test]
fn bracket_defect_examples() {
    let ctx = SphereContext::new(16, 2).unwrap();
    assert!(bms_defect(&SphereSymbol::x(), &SphereSymbol::y(), &ctx).unwrap() <= 1e-10);
    let y10 = spherical_harmonic(idx(1, 0));
    let y11 = spherical_harmonic(idx(1, 1));
    assert!(bms_defect(&y10, &y11, &ctx).unwrap() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn toeplitz_is_linear_and_hermitian(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
        let frame = CoherentFrame::for_symbol_degree(6, 2).unwrap();
        let (x, y, z) = (SphereSymbol::x(), SphereSymbol::y(), SphereSymbol::z());
        let f = x.scale_real(a).add(&y.mul(&z).scale_real(b)).add(&SphereSymbol::one().scale_real(c));
        let tf = toeplitz(&f, &frame).unwrap();
        let combo = &(&toeplitz(&x, &frame).unwrap().scale_real(a)
            + &toeplitz(&y.mul(&z), &frame).unwrap().scale_real(b))
            + &ComplexMatrix::identity(6).scale_real(c);
        prop_assert!((&tf - &combo).max_abs() < 1e-12);
        prop_assert!(tf.is_hermitian());
    }

    #[test]
    fn berezin_symbol_is_contractive(entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64)) {
        let frame = CoherentFrame::for_symbol_degree(8, 2).unwrap();
        let a = ComplexMatrix::from_fn(8, 8, |i, j| Complex64::new(entries[i * 8 + j].0, entries[i * 8 + j].1))
            .unwrap()
            .hermitian_part();
        let sym = berezin_symbol(&a, &frame).unwrap();
        let sup = sym.iter().fold(0.0f64, |acc, v| acc.max(v.norm()));
        prop_assert!(sup <= spectral_norm(&a) + 1e-12);
    }

    #[test]
    fn laplacian_is_positive(entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64)) {
        let ctx = SphereContext::new(8, 1).unwrap();
        let a = ComplexMatrix::from_fn(8, 8, |i, j| Complex64::new(entries[i * 8 + j].0, entries[i * 8 + j].1))
            .unwrap()
            .hermitian_part();
        let q = a.normalized_hs_inner(&nc_laplacian_apply(&a, &ctx).unwrap()).unwrap();
        prop_assert!(q.re >= -1e-12);
    }
}
