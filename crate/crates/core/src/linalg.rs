//! Fixed-dimension complex vectors and matrices.
//!
//! Everything is stack allocated (`[C64; D]`, `[[C64; D]; D]`) so the
//! functional evaluations inside the optimizer and the Monte-Carlo loops never
//! touch the heap.

use std::f64::consts::PI;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerance;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A normalized pure state |ψ⟩ in the computational basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector<const D: usize> {
    amps: [C64; D],
}

impl<const D: usize> StateVector<D> {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(amps: [C64; D]) -> Result<Self> {
        check_finite(&amps)?;
        let norm_sq = norm_sq(&amps);
        if (norm_sq - 1.0).abs() > tolerance::STATE_NORM {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: [C64; D]) -> Result<Self> {
        check_finite(&amps)?;
        let norm_sq = norm_sq(&amps);
        if norm_sq <= f64::MIN_POSITIVE {
            return Err(Error::NotNormalized { norm_sq });
        }
        let scale = norm_sq.sqrt().recip();
        Ok(Self { amps: amps.map(|a| a * scale) })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        let amps: [C64; D] = amps
            .try_into()
            .map_err(|_| Error::DimensionMismatch { expected: D, got: amps.len() })?;
        Self::normalized(amps)
    }

    /// Builds Σ_j r_j e^{iφ_j} |j⟩ and renormalizes the moduli.
    pub fn from_polar(moduli: &[f64], phases: &[f64]) -> Result<Self> {
        if moduli.len() != D {
            return Err(Error::DimensionMismatch { expected: D, got: moduli.len() });
        }
        if phases.len() != D {
            return Err(Error::DimensionMismatch { expected: D, got: phases.len() });
        }
        let mut amps = [ZERO; D];
        for (a, (&r, &phi)) in amps.iter_mut().zip(moduli.iter().zip(phases)) {
            *a = C64::from_polar(r, phi);
        }
        Self::normalized(amps)
    }

    /// Computational basis state |k⟩.
    pub fn basis_state(k: usize) -> Self {
        assert!(k < D, "basis index {k} out of range for dimension {D}");
        let mut amps = [ZERO; D];
        amps[k] = ONE;
        Self { amps }
    }

    /// Caller guarantees unit norm (used by parametrizations that are
    /// normalized by construction).
    pub(crate) fn from_normalized_unchecked(amps: [C64; D]) -> Self {
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[C64; D] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        D
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amps)
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = C64::from_polar(1.0, theta);
        Self { amps: self.amps.map(|a| a * phase) }
    }

    pub fn moduli(&self) -> [f64; D] {
        self.amps.map(|a| a.norm())
    }

    /// Phases in (−π, π], gauged so that the first nonzero amplitude is real
    /// and positive.
    pub fn gauged_phases(&self) -> [f64; D] {
        let reference = self
            .amps
            .iter()
            .find(|a| a.norm() > 1e-12)
            .map(|a| a.arg())
            .unwrap_or(0.0);
        self.amps.map(|a| {
            if a.norm() <= 1e-12 {
                0.0
            } else {
                wrap_phase(a.arg() - reference)
            }
        })
    }
}

/// ⟨x|y⟩.
pub fn inner_product<const D: usize>(x: &StateVector<D>, y: &StateVector<D>) -> C64 {
    x.inner(y)
}

/// Maps an angle into (−π, π].
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

fn norm_sq<const D: usize>(amps: &[C64; D]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_finite(amps: &[C64]) -> Result<()> {
    if amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NotNormalized { norm_sq: f64::NAN })
    }
}

/// A d×d unitary, stored row-major. For bases, column j is eigenstate j.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryMatrix<const D: usize> {
    entries: [[C64; D]; D],
}

impl<const D: usize> UnitaryMatrix<D> {
    pub fn new(entries: [[C64; D]; D]) -> Result<Self> {
        let m = Self { entries };
        let deviation = m.unitarity_deviation();
        if !(deviation <= tolerance::UNITARITY) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(m)
    }

    pub(crate) fn from_entries_unchecked(entries: [[C64; D]; D]) -> Self {
        Self { entries }
    }

    pub fn identity() -> Self {
        let mut entries = [[ZERO; D]; D];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self { entries }
    }

    pub fn diagonal(diag: [C64; D]) -> Result<Self> {
        let mut entries = [[ZERO; D]; D];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = diag[i];
        }
        Self::new(entries)
    }

    /// Permutation matrix sending |k⟩ to |perm[k]⟩.
    pub fn permutation(perm: &[usize; D]) -> Self {
        let mut entries = [[ZERO; D]; D];
        for (k, &target) in perm.iter().enumerate() {
            entries[target][k] = ONE;
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[[C64; D]; D] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn column(&self, col: usize) -> [C64; D] {
        std::array::from_fn(|row| self.entries[row][col])
    }

    pub fn adjoint(&self) -> Self {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i].conj()));
        Self { entries }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..D).fold(ZERO, |acc, k| acc + self.entries[i][k] * rhs.entries[k][j]))
        });
        Self { entries }
    }

    /// Integer power; negative exponents use the adjoint.
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.adjoint() } else { *self };
        (0..exp.unsigned_abs()).fold(Self::identity(), |acc, _| acc.matmul(&base))
    }

    pub fn apply(&self, psi: &StateVector<D>) -> StateVector<D> {
        StateVector::from_normalized_unchecked(self.apply_raw(psi.amplitudes()))
    }

    pub(crate) fn apply_raw(&self, v: &[C64; D]) -> [C64; D] {
        std::array::from_fn(|i| {
            self.entries[i]
                .iter()
                .zip(v.iter())
                .fold(ZERO, |acc, (m, x)| acc + m * x)
        })
    }

    /// max_ij |(M†M − I)_ij|
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..D {
            for j in 0..D {
                let dot = (0..D).fold(ZERO, |acc, k| acc + self.entries[k][i].conj() * self.entries[k][j]);
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        if worst.is_nan() {
            f64::INFINITY
        } else {
            worst
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..D {
            for j in 0..D {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { entries: self.entries.map(|row| row.map(|x| x * factor)) }
    }
}

/// Born outcome distribution with nonnegative entries summing to one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityVector<const D: usize> {
    probs: [f64; D],
}

impl<const D: usize> ProbabilityVector<D> {
    /// Clamps round-off negatives (≥ −1e-12) to exactly zero and validates
    /// the sum.
    pub fn new(mut probs: [f64; D]) -> Result<Self> {
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidProbabilities(format!("non-finite entry {p}")));
            }
            if *p < 0.0 {
                if *p < -tolerance::NEGATIVE_PROBABILITY {
                    return Err(Error::InvalidProbabilities(format!("negative entry {p}")));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tolerance::PROBABILITY_SUM {
            return Err(Error::InvalidProbabilities(format!("sum {sum} != 1")));
        }
        Ok(Self { probs })
    }

    pub fn uniform() -> Self {
        Self { probs: [1.0 / D as f64; D] }
    }

    pub fn probs(&self) -> &[f64; D] {
        &self.probs
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// p_j = |⟨x_j|ψ⟩|² for the basis whose columns are the x_j, without
/// validation. Hot-loop entry point.
#[inline]
pub(crate) fn born_raw<const D: usize>(psi: &[C64; D], basis: &UnitaryMatrix<D>) -> [f64; D] {
    let m = &basis.entries;
    std::array::from_fn(|j| {
        let mut acc = ZERO;
        for i in 0..D {
            acc += m[i][j].conj() * psi[i];
        }
        acc.norm_sqr()
    })
}

/// Born probabilities of `psi` in the basis given by the columns of `basis`.
pub fn born_probabilities<const D: usize>(
    psi: &StateVector<D>,
    basis: &UnitaryMatrix<D>,
) -> ProbabilityVector<D> {
    let raw = born_raw(psi.amplitudes(), basis);
    ProbabilityVector::new(raw).expect("unitary basis and normalized state give a distribution")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fourier<const D: usize>() -> UnitaryMatrix<D> {
        let s = (D as f64).sqrt().recip();
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| C64::from_polar(s, 2.0 * PI * (i * j) as f64 / D as f64))
        });
        UnitaryMatrix::new(entries).unwrap()
    }

    #[test]
    fn computational_states_are_orthonormal() {
        let a0 = StateVector::<5>::basis_state(0);
        let a1 = StateVector::<5>::basis_state(1);
        assert_eq!(inner_product(&a0, &a0), ONE);
        assert_eq!(inner_product(&a0, &a1), ZERO);
    }

    #[test]
    fn inner_product_conjugates_first_argument() {
        let x = StateVector::<4>::from_slice(&[C64::new(0.0, 1.0), ZERO, ZERO, ZERO]).unwrap();
        let y = StateVector::<4>::basis_state(0);
        assert_abs_diff_eq!(inner_product(&x, &y).im, -1.0);
    }

    #[test]
    fn from_slice_rejects_wrong_length() {
        let err = StateVector::<5>::from_slice(&[ONE; 4]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 5, got: 4 }));
    }

    #[test]
    fn new_rejects_unnormalized_and_nan() {
        assert!(StateVector::<4>::new([ONE; 4]).is_err());
        let mut amps = [ZERO; 4];
        amps[0] = C64::new(f64::NAN, 0.0);
        assert!(StateVector::<4>::normalized(amps).is_err());
        assert!(StateVector::<4>::normalized([ZERO; 4]).is_err());
    }

    #[test]
    fn eigenstate_probabilities() {
        let p = born_probabilities(&StateVector::<5>::basis_state(2), &UnitaryMatrix::identity());
        assert_eq!(p.probs(), &[0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_term_superposition() {
        let s = 0.5f64.sqrt();
        let psi = StateVector::<5>::from_slice(&[C64::new(s, 0.0), C64::new(s, 0.0), ZERO, ZERO, ZERO]).unwrap();
        let p = born_probabilities(&psi, &UnitaryMatrix::identity());
        for (got, want) in p.probs().iter().zip([0.5, 0.5, 0.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn fourier_maps_a0_to_uniform_state() {
        let phi = fourier::<5>();
        let b0 = phi.apply(&StateVector::basis_state(0));
        let col = phi.column(0);
        for (a, c) in b0.amplitudes().iter().zip(col.iter()) {
            assert_abs_diff_eq!((a - c).norm(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(a.norm(), 5f64.sqrt().recip(), epsilon = 1e-15);
        }
    }

    #[test]
    fn diagonal_unitary_multiplies_eigenstate_by_phase() {
        let w = |k: u32| C64::from_polar(1.0, 2.0 * PI * k as f64 / 5.0);
        let u = UnitaryMatrix::<5>::diagonal([w(0), w(1), w(4), w(4), w(1)]).unwrap();
        let out = u.apply(&StateVector::basis_state(1));
        assert_abs_diff_eq!((out.amplitudes()[1] - w(1)).norm(), 0.0, epsilon = 1e-15);
        let p = born_probabilities(&out, &UnitaryMatrix::identity());
        assert_abs_diff_eq!(p.probs()[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        let mut e = [[ZERO; 4]; 4];
        e[0][0] = C64::new(2.0, 0.0);
        assert!(matches!(UnitaryMatrix::<4>::new(e), Err(Error::NotUnitary { .. })));
        assert!(UnitaryMatrix::<4>::diagonal([ONE, ONE, ONE, C64::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn probability_clamping() {
        let p = ProbabilityVector::new([1.0 + 5e-13, -5e-13, 0.0, 0.0]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
        assert!(ProbabilityVector::new([1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(ProbabilityVector::new([0.5, 0.4, 0.0, 0.0]).is_err());
    }

    #[test]
    fn pow_and_adjoint() {
        let phi = fourier::<5>();
        let id = UnitaryMatrix::<5>::identity();
        assert!(phi.pow(4).max_abs_diff(&id) < 1e-12);
        assert!(phi.pow(-1).max_abs_diff(&phi.adjoint()) < 1e-15);
        assert!(phi.matmul(&phi.pow(-1)).max_abs_diff(&id) < 1e-12);
    }

    #[test]
    fn permutation_matrix_moves_basis_states() {
        let p = UnitaryMatrix::<4>::permutation(&[2, 0, 3, 1]);
        let out = p.apply(&StateVector::basis_state(0));
        assert_eq!(out.amplitudes()[2], ONE);
    }

    #[test]
    fn wrap_phase_range() {
        assert_abs_diff_eq!(wrap_phase(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(-PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(0.25), 0.25);
    }
}
