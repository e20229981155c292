//! Executable structure-preserving discretizations.
//!
//! Three concrete discretizations are provided together with the machinery
//! to measure how well they commute with the continuous structure they
//! approximate:
//!
//! * [`circle`]: the forward Euler difference operator (a discretization of
//!   `d/dθ` that is not a derivation), the block-diagonal Fourier truncation
//!   (which is), and transfer-operator matrices for circle diffeomorphisms.
//! * [`sphere_quant`]: Berezin-Toeplitz quantization of the two-sphere built
//!   from spin coherent states, with the quantized Poisson bracket, the
//!   noncommutative Laplacian, matrix spherical harmonics and heat flow.
//! * [`diagrams`]: defect series, power-law rate fits and the
//!   consistency / structure-preservation / convergence classification.
//!
//! [`symbols`] is the exact continuous side on the sphere (reduced
//! polynomials with Poisson bracket and Laplace-Beltrami operator), and
//! [`numerics`] holds the dense linear algebra and quadrature primitives.

pub mod circle;
pub mod diagrams;
mod error;
pub mod numerics;
pub mod sphere_quant;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use diagrams::{classify, fit_rate, Category, DefectPoint, RateFit, Verdict};
pub use numerics::{
    build_quadrature, hermitian_eigen, spectral_norm, ComplexMatrix, EigenDecomposition,
    SphereQuadrature,
};
pub use sphere_quant::{Calibration, CoherentFrame, MatrixHarmonicBasis, SphereContext, SpinFrame};
pub use symbols::{HarmonicIndex, SphereSymbol};
