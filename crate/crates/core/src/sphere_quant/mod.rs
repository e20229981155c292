//! Berezin-Toeplitz quantization of the two-sphere.
//!
//! Coherent states on a product quadrature realize the Toeplitz map
//! `f ↦ T_m(f)` and the Berezin symbol `A ↦ ⟨Ω|A|Ω⟩`. A [`SphereContext`]
//! bundles the frame, its bracket calibration and the quantized coordinates
//! for one dimension `m`; the experiment functions measure the diagram
//! defects against the exact polynomial side in [`crate::symbols`].

mod calibration;
mod coherent;
mod context;
mod experiments;
mod heat;
mod laplacian;
mod matrix_harmonics;
mod spin;
mod toeplitz;

pub use calibration::{calibrate, quantized_bracket, Calibration, CALIBRATION_TOLERANCE};
pub use coherent::{coherent_state, required_exactness, CoherentFrame};
pub use context::SphereContext;
pub use experiments::{
    berezin_transform_eigenvalue, bms_defect, harmonic_samples, laplacian_convergence_defect, norm_defect,
    section_defect, toeplitz_gram_min_singular, toeplitz_harmonic, NormDefect, BEREZIN_SPREAD_TOLERANCE,
    NORM_SUP_RESOLUTION, POLYNOMIAL_HARMONIC_LIMIT,
};
pub use heat::heat_evolve;
pub use laplacian::{
    nc_laplacian_apply, nc_laplacian_spectrum, nc_laplacian_spectrum_for_dimension, nc_laplacian_spectrum_with,
    nc_laplacian_superoperator, sector_leakage, spectrum_clusters, SpectrumCluster, SpectrumMethod,
    DENSE_SPECTRUM_LIMIT, MAX_SPECTRUM_DIMENSION, SECTOR_LEAK_TOLERANCE,
};
pub use matrix_harmonics::{matrix_harmonics, MatrixHarmonicBasis, DEGENERACY_GAP};
pub use spin::{spin_frame, SpinFrame};
pub use toeplitz::{berezin_symbol, toeplitz, toeplitz_sampled};
