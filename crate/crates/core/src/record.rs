//! Plain serializable mirrors of the numeric types, used in reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{StateVector, UnitaryMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexRecord {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexRecord> for C64 {
    fn from(z: ComplexRecord) -> Self {
        C64::new(z.re, z.im)
    }
}

/// A state with its amplitudes and, redundantly, moduli and gauged phases
/// (φ₀ = 0 on the first non-zero amplitude). Only `amplitudes` is read back.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub amplitudes: Vec<ComplexRecord>,
    #[serde(default)]
    pub moduli: Vec<f64>,
    #[serde(default)]
    pub phases: Vec<f64>,
}

impl<const D: usize> From<&StateVector<D>> for StateRecord {
    fn from(psi: &StateVector<D>) -> Self {
        Self {
            amplitudes: psi.amplitudes().iter().map(|&a| a.into()).collect(),
            moduli: psi.moduli().to_vec(),
            phases: psi.gauged_phases().to_vec(),
        }
    }
}

impl StateRecord {
    /// Rebuilds the state; amplitudes must already be normalized.
    pub fn to_state<const D: usize>(&self) -> Result<StateVector<D>> {
        let amps: Vec<C64> = self.amplitudes.iter().map(|&a| a.into()).collect();
        StateVector::from_slice(&amps)
    }
}

/// Row-major matrix entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: Vec<Vec<ComplexRecord>>,
}

impl<const D: usize> From<&UnitaryMatrix<D>> for MatrixRecord {
    fn from(m: &UnitaryMatrix<D>) -> Self {
        Self {
            rows: m.entries().iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect(),
        }
    }
}

impl MatrixRecord {
    pub fn to_unitary<const D: usize>(&self) -> Result<UnitaryMatrix<D>> {
        if self.rows.len() != D {
            return Err(Error::DimensionMismatch { expected: D, got: self.rows.len() });
        }
        let mut entries = [[C64::new(0.0, 0.0); D]; D];
        for (dst, src) in entries.iter_mut().zip(&self.rows) {
            if src.len() != D {
                return Err(Error::DimensionMismatch { expected: D, got: src.len() });
            }
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = s.into();
            }
        }
        UnitaryMatrix::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::fourier;

    #[test]
    fn state_round_trip() {
        let psi = StateVector::<5>::from_polar(&[0.55, 0.45, 0.0, 0.45, 0.55], &[0.0, 1.0, 0.0, 2.0, -1.0]).unwrap();
        let rec = StateRecord::from(&psi);
        assert_eq!(rec.to_state::<5>().unwrap(), psi);
        assert!(rec.to_state::<4>().is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let f = fourier::<4>();
        let rec = MatrixRecord::from(&f);
        assert_eq!(rec.to_unitary::<4>().unwrap(), f);
        let mut bad = rec.clone();
        bad.rows[0][0].re = 2.0;
        assert!(bad.to_unitary::<4>().is_err());
    }
}
