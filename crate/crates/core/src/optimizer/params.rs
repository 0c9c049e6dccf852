//! Trigonometric state parametrization, normalized by construction:
//!
//! ```text
//! |ψ⟩ = sin α₁ ⋯ sin α_{d−1} |0⟩ + Σ_{k≥1} cos α_k sin α_{k+1} ⋯ sin α_{d−1} e^{iφ_k} |k⟩
//! ```
//!
//! with φ₀ ≡ 0. The flat search vector is `[α₁ … α_{d−1}, φ₁ … φ_{d−1}]`.
//! A [`Parametrization`] may place amplitude k on basis slot `slots[k]` and
//! expand the result in another basis (`frame`); both are used to cross-check
//! minima.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{StateVector, UnitaryMatrix, C64};

/// Angles α₁…α_{d−1} and phases φ₀…φ_{d−1}, radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub alphas: Vec<f64>,
    pub phis: Vec<f64>,
}

/// Moduli r_k from the angles; `alphas[k − 1]` is α_k.
#[inline]
fn moduli<const D: usize>(alphas: &[f64]) -> [f64; D] {
    let mut r = [0.0; D];
    let mut tail = 1.0;
    for k in (1..D).rev() {
        let (s, c) = alphas[k - 1].sin_cos();
        r[k] = c * tail;
        tail *= s;
    }
    r[0] = tail;
    r
}

/// Builds the state of the standard parametrization.
pub fn params_to_state<const D: usize>(p: &StateParams) -> Result<StateVector<D>> {
    if p.alphas.len() != D - 1 {
        return Err(Error::DimensionMismatch { expected: D - 1, got: p.alphas.len() });
    }
    if p.phis.len() != D {
        return Err(Error::DimensionMismatch { expected: D, got: p.phis.len() });
    }
    let r = moduli::<D>(&p.alphas);
    let amps = std::array::from_fn(|k| C64::from_polar(r[k], p.phis[k]));
    Ok(StateVector::from_normalized_unchecked(amps))
}

/// Inverse of [`params_to_state`] up to global phase (φ₀ = 0).
pub fn state_to_params<const D: usize>(psi: &StateVector<D>) -> StateParams {
    let x = Parametrization::<D>::standard().params_of(psi);
    let mut phis = vec![0.0];
    phis.extend_from_slice(&x[D - 1..]);
    StateParams { alphas: x[..D - 1].to_vec(), phis }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parametrization<const D: usize> {
    frame: Option<UnitaryMatrix<D>>,
    slots: [usize; D],
}

impl<const D: usize> Parametrization<D> {
    pub fn standard() -> Self {
        Self { frame: None, slots: std::array::from_fn(|k| k) }
    }

    /// Amplitude k is attached to basis state `slots[k]`.
    pub fn permuted(slots: [usize; D]) -> Result<Self> {
        let mut seen = [false; D];
        for &s in &slots {
            if s >= D || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidConfig(format!("slots {slots:?} are not a permutation")));
            }
        }
        Ok(Self { frame: None, slots })
    }

    /// Expands the parametrized coefficients in the columns of `frame`.
    pub fn in_frame(mut self, frame: UnitaryMatrix<D>) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn slots(&self) -> &[usize; D] {
        &self.slots
    }

    pub fn has_frame(&self) -> bool {
        self.frame.is_some()
    }

    /// Length of the flat search vector.
    pub const fn len() -> usize {
        2 * (D - 1)
    }

    #[inline]
    pub fn state(&self, x: &[f64]) -> StateVector<D> {
        let r = moduli::<D>(&x[..D - 1]);
        let mut coeffs = [C64::new(0.0, 0.0); D];
        coeffs[self.slots[0]] = C64::new(r[0], 0.0);
        for k in 1..D {
            coeffs[self.slots[k]] = C64::from_polar(r[k], x[D - 2 + k]);
        }
        let amps = match &self.frame {
            Some(m) => m.apply_raw(&coeffs),
            None => coeffs,
        };
        StateVector::from_normalized_unchecked(amps)
    }

    /// Search vector reproducing `psi` up to global phase.
    pub fn params_of(&self, psi: &StateVector<D>) -> Vec<f64> {
        let coeffs = match &self.frame {
            Some(m) => m.adjoint().apply_raw(psi.amplitudes()),
            None => *psi.amplitudes(),
        };
        let v: [C64; D] = std::array::from_fn(|k| coeffs[self.slots[k]]);
        let mut x = vec![0.0; 2 * (D - 1)];
        let mut head_sq = v[0].norm_sqr();
        for k in 1..D {
            x[k - 1] = head_sq.sqrt().atan2(v[k].norm());
            head_sq += v[k].norm_sqr();
        }
        let ref_phase = v[0].arg();
        for k in 1..D {
            x[D - 2 + k] = v[k].arg() - ref_phase;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::haar_random_state;
    use crate::rng::{stream, Domain};
    use std::f64::consts::FRAC_PI_2;

    fn same_ray<const D: usize>(a: &StateVector<D>, b: &StateVector<D>) -> bool {
        (a.inner(b).norm() - 1.0).abs() < 1e-12
    }

    #[test]
    fn right_angles_give_a0() {
        let p = StateParams { alphas: vec![FRAC_PI_2; 4], phis: vec![0.0; 5] };
        let psi = params_to_state::<5>(&p).unwrap();
        assert!((psi.amplitudes()[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn last_angle_zero_gives_top_state() {
        let p = StateParams { alphas: vec![0.3, 1.1, 2.0, 0.0], phis: vec![0.0, 0.4, 0.1, 0.2, 0.0] };
        let psi = params_to_state::<5>(&p).unwrap();
        assert!((psi.amplitudes()[4].norm() - 1.0).abs() < 1e-15);
        let p4 = StateParams { alphas: vec![0.3, 1.1, 0.0], phis: vec![0.0; 4] };
        assert!((params_to_state::<4>(&p4).unwrap().amplitudes()[3].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wrong_lengths_rejected() {
        let p = StateParams { alphas: vec![0.0; 3], phis: vec![0.0; 5] };
        assert!(params_to_state::<5>(&p).is_err());
    }

    #[test]
    fn round_trip_through_params() {
        for i in 0..50 {
            let psi: StateVector<5> = haar_random_state(&mut stream(9, Domain::TestStates, i));
            let p = state_to_params(&psi);
            let back = params_to_state::<5>(&p).unwrap();
            assert!(same_ray(&psi, &back));
            assert!((back.norm_sq() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reparametrizations_round_trip() {
        let frame = crate::mub::fourier::<4>();
        let param = Parametrization::<4>::permuted([2, 0, 3, 1]).unwrap().in_frame(frame);
        for i in 0..50 {
            let psi: StateVector<4> = haar_random_state(&mut stream(9, Domain::TestStates, i));
            let back = param.state(&param.params_of(&psi));
            assert!(same_ray(&psi, &back));
        }
        assert!(Parametrization::<4>::permuted([0, 0, 1, 2]).is_err());
    }
}
