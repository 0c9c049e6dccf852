//! Uncertainty quantifiers: Shannon entropy (bits) and permutation-minimized
//! variance of Born distributions, and their sums over tuples of bases.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{born_raw, ProbabilityVector, StateVector, C64};
use crate::mub::{Basis, BasisLabel};
use crate::tolerance;

/// Which uncertainty sum to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalKind {
    #[serde(rename = "entropy")]
    ShannonEntropySum,
    #[serde(rename = "variance")]
    MinVarianceSum,
}

impl FunctionalKind {
    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::ShannonEntropySum => "entropy",
            FunctionalKind::MinVarianceSum => "variance",
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "entropy" | "shannon" => Ok(FunctionalKind::ShannonEntropySum),
            "variance" => Ok(FunctionalKind::MinVarianceSum),
            other => Err(Error::InvalidConfig(format!("unknown functional {other:?}"))),
        }
    }
}

/// Three distinct bases, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripletId {
    labels: [BasisLabel; 3],
}

impl TripletId {
    pub fn new(a: BasisLabel, b: BasisLabel, c: BasisLabel) -> Result<Self> {
        let mut labels = [a, b, c];
        labels.sort();
        if labels[0] == labels[1] {
            return Err(Error::RepeatedBasis(labels[0]));
        }
        if labels[1] == labels[2] {
            return Err(Error::RepeatedBasis(labels[1]));
        }
        Ok(Self { labels })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let labels = BasisLabel::parse_list(s)?;
        match labels.as_slice() {
            [a, b, c] => Self::new(*a, *b, *c),
            _ => Err(Error::BasisCount { min: 3, max: 3, got: labels.len() }),
        }
    }

    pub fn labels(&self) -> [BasisLabel; 3] {
        self.labels
    }

    pub fn contains(&self, label: BasisLabel) -> bool {
        self.labels.contains(&label)
    }

    pub fn valid_for(&self, dim: usize) -> bool {
        self.labels.iter().all(|l| l.valid_for(dim))
    }

    /// All triplets of a complete set in lexicographic order.
    pub fn all(dim: usize) -> Vec<TripletId> {
        let labels = BasisLabel::for_dim(dim);
        let mut out = Vec::new();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                for k in j + 1..labels.len() {
                    out.push(TripletId { labels: [labels[i], labels[j], labels[k]] });
                }
            }
        }
        out
    }
}

impl fmt::Display for TripletId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for TripletId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TripletId {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let s = String::deserialize(d)?;
        TripletId::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Eigenvalue `perm[j]` is attached to eigenstate j.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EigenvalueAssignment<const D: usize> {
    pub perm: [usize; D],
}

impl<const D: usize> EigenvalueAssignment<D> {
    pub fn identity() -> Self {
        Self { perm: std::array::from_fn(|i| i) }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = [false; D];
        self.perm.iter().all(|&p| p < D && !std::mem::replace(&mut seen[p], true))
    }
}

/// H = −Σ p log₂ p, with p below 1e-15 counted as zero.
pub fn shannon_entropy<const D: usize>(p: &ProbabilityVector<D>) -> f64 {
    entropy_bits(p.probs())
}

#[inline]
pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    let nats: f64 = probs
        .iter()
        .filter(|&&p| p > tolerance::ENTROPY_ZERO)
        .map(|&p| -p * p.ln())
        .sum();
    (nats / std::f64::consts::LN_2).max(0.0)
}

fn check_count(n: usize, max: usize) -> Result<()> {
    if n < 2 || n > max {
        return Err(Error::BasisCount { min: 2, max, got: n });
    }
    Ok(())
}

/// Σ_bases H(born(ψ, basis)).
pub fn entropy_sum<const D: usize>(psi: &StateVector<D>, bases: &[Basis<D>]) -> Result<f64> {
    check_count(bases.len(), D + 1)?;
    Ok(evaluate_raw(FunctionalKind::ShannonEntropySum, psi.amplitudes(), bases))
}

/// Variance of the distribution with eigenvalues `perm`, computed about the
/// mean so it is never negative.
#[inline]
fn assignment_variance<const D: usize>(probs: &[f64; D], perm: &[usize; D]) -> f64 {
    let mean: f64 = probs.iter().zip(perm).map(|(p, &e)| p * e as f64).sum();
    probs
        .iter()
        .zip(perm)
        .map(|(p, &e)| {
            let dev = e as f64 - mean;
            p * dev * dev
        })
        .sum()
}

/// Exhaustive minimum over all d! eigenvalue assignments of {0, …, d−1}
/// (Heap's algorithm). Ties keep the first assignment visited.
pub fn min_variance_of<const D: usize>(probs: &[f64; D]) -> (f64, [usize; D]) {
    let mut perm: [usize; D] = std::array::from_fn(|i| i);
    let mut best = assignment_variance(probs, &perm);
    let mut best_perm = perm;
    let mut c = [0usize; D];
    let mut i = 1;
    while i < D {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let v = assignment_variance(probs, &perm);
            if v < best {
                best = v;
                best_perm = perm;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    (best, best_perm)
}

/// min over eigenvalue permutations of ⟨X²⟩ − ⟨X⟩² for X = Σ P(j)|x_j⟩⟨x_j|.
pub fn min_variance<const D: usize>(psi: &StateVector<D>, basis: &Basis<D>) -> (f64, EigenvalueAssignment<D>) {
    let probs = born_raw(psi.amplitudes(), &basis.matrix);
    let (value, perm) = min_variance_of(&probs);
    (value, EigenvalueAssignment { perm })
}

/// Σ_bases min_variance(ψ, basis).
pub fn variance_sum<const D: usize>(psi: &StateVector<D>, bases: &[Basis<D>]) -> Result<f64> {
    check_count(bases.len(), D + 1)?;
    Ok(evaluate_raw(FunctionalKind::MinVarianceSum, psi.amplitudes(), bases))
}

/// Evaluates a functional sum for a validated state.
pub fn evaluate<const D: usize>(kind: FunctionalKind, psi: &StateVector<D>, bases: &[Basis<D>]) -> Result<f64> {
    match kind {
        FunctionalKind::ShannonEntropySum => entropy_sum(psi, bases),
        FunctionalKind::MinVarianceSum => variance_sum(psi, bases),
    }
}

/// Unchecked hot-loop evaluation; `amps` must be normalized.
#[inline]
pub(crate) fn evaluate_raw<const D: usize>(kind: FunctionalKind, amps: &[C64; D], bases: &[Basis<D>]) -> f64 {
    bases
        .iter()
        .map(|b| {
            let probs = born_raw(amps, &b.matrix);
            match kind {
                FunctionalKind::ShannonEntropySum => entropy_bits(&probs),
                FunctionalKind::MinVarianceSum => min_variance_of(&probs).0,
            }
        })
        .sum()
}
