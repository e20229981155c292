use super::{calibrate, toeplitz, Calibration, CoherentFrame};
use crate::numerics::ComplexMatrix;
use crate::symbols::SphereSymbol;
use crate::{Error, Result};

/// Everything a sphere experiment needs at one dimension `m`.
///
/// Holds the coherent frame (sized for symbols up to `max_symbol_degree`),
/// its calibration and the quantized coordinates `∂_k = T_m(X_k)`.
/// Immutable once built; share freely across threads.
#[derive(Clone, Debug)]
pub struct SphereContext {
    frame: CoherentFrame,
    calibration: Calibration,
    coordinates: [ComplexMatrix; 3],
    max_symbol_degree: usize,
}

impl SphereContext {
    pub fn new(m: usize, max_symbol_degree: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Contract(format!("sphere experiments need m >= 2, got {m}")));
        }
        let frame = CoherentFrame::for_symbol_degree(m, max_symbol_degree.max(1))?;
        let calibration = calibrate(m, &frame)?;
        let coordinates = [
            toeplitz(&SphereSymbol::x(), &frame)?,
            toeplitz(&SphereSymbol::y(), &frame)?,
            toeplitz(&SphereSymbol::z(), &frame)?,
        ];
        Ok(Self { frame, calibration, coordinates, max_symbol_degree: max_symbol_degree.max(1) })
    }

    pub fn m(&self) -> usize {
        self.frame.m()
    }

    pub fn frame(&self) -> &CoherentFrame {
        &self.frame
    }

    pub fn calibration(&self) -> &Calibration {
        &self.calibration
    }

    /// `[T_m(x), T_m(y), T_m(z)]`.
    pub fn coordinates(&self) -> &[ComplexMatrix; 3] {
        &self.coordinates
    }

    pub fn max_symbol_degree(&self) -> usize {
        self.max_symbol_degree
    }

    pub(crate) fn require_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_symbol_degree {
            return Err(Error::InsufficientExactness {
                required: super::coherent::required_exactness(self.m(), degree),
                available: self.frame.quadrature().exactness(),
            });
        }
        Ok(())
    }
}
