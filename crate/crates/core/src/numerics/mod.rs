//! Dense linear algebra and sphere quadrature primitives.
//!
//! Norms of matrices are operator (spectral) norms throughout; sphere
//! integrals use a Gauss-Legendre by uniform-longitude product rule.

mod eigen;
mod matrix;
mod quadrature;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, singular_values, spectral_norm, EigenDecomposition};
pub use matrix::{ComplexMatrix, HERMITIAN_TOLERANCE};
pub use quadrature::{build_quadrature, SphereNode, SphereQuadrature, MAX_EXACTNESS_DEGREE};
