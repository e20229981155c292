use num_complex::Complex64;
use serde::Serialize;

use super::{spin_frame, toeplitz, CoherentFrame};
use crate::numerics::{spectral_norm, ComplexMatrix};
use crate::symbols::SphereSymbol;
use crate::{Error, Result};

/// Residual allowed in the `T_m(z) = c_m Sz` fit and the bracket identity.
pub const CALIBRATION_TOLERANCE: f64 = 1e-10;

/// Normalization of the quantized bracket at dimension `m`.
///
/// `cm` is the coordinate scale `T_m(z) = cm·Sz`; `sign · i · betam · [A, B]`
/// is the bracket that maps `(T_m(x), T_m(y))` onto `T_m(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub m: usize,
    pub cm: f64,
    pub betam: f64,
    pub sign: f64,
}

/// Least-squares calibration from the frame's own Toeplitz coordinates.
pub fn calibrate(m: usize, frame: &CoherentFrame) -> Result<Calibration> {
    if m < 2 || frame.m() != m {
        return Err(Error::Contract(format!(
            "calibration needs m >= 2 and a matching frame (m = {m}, frame m = {})",
            frame.m()
        )));
    }
    let coords: Vec<ComplexMatrix> = (0..3)
        .map(|axis| toeplitz(&SphereSymbol::coordinate(axis), frame))
        .collect::<Result<_>>()?;
    let sz = spin_frame(m)?.sz;

    let cm = sz.normalized_hs_inner(&coords[2])?.re / sz.normalized_hs_inner(&sz)?.re;
    let fit_residual = spectral_norm(&(&coords[2] - &sz.scale_real(cm)));
    if !(cm > 0.0) || fit_residual > CALIBRATION_TOLERANCE {
        return Err(Error::Calibration(format!(
            "T(z) is not a positive multiple of Sz (c_m = {cm:e}, residual {fit_residual:e})"
        )));
    }

    let comm = coords[0].commutator(&coords[1])?.scale(Complex64::new(0.0, 1.0));
    let alpha = comm.normalized_hs_inner(&coords[2])?.re / comm.normalized_hs_inner(&comm)?.re;
    let cal = Calibration { m, cm, betam: alpha.abs(), sign: alpha.signum() };
    let defect = spectral_norm(&(&quantized_bracket(&coords[0], &coords[1], &cal)? - &coords[2]));
    if defect > CALIBRATION_TOLERANCE {
        return Err(Error::Calibration(format!("bracket identity defect {defect:e}")));
    }
    Ok(cal)
}

/// `sign · i · betam · (AB - BA)`.
pub fn quantized_bracket(a: &ComplexMatrix, b: &ComplexMatrix, cal: &Calibration) -> Result<ComplexMatrix> {
    if a.rows() != cal.m {
        return Err(Error::Dimension(format!("operands of size {} for calibration m = {}", a.rows(), cal.m)));
    }
    Ok(a.commutator(b)?.scale(Complex64::new(0.0, cal.sign * cal.betam)))
}
