//! Imperfect measurements as POVMs with cross-talk, predicted entropy sums
//! and bootstrap error bars from finite counts.
//!
//! A noisy element is π^γ = (1 − λ)|γ⟩⟨γ| + λ M^γ, where {M^γ} is a random
//! positive completion of the identity, M^γ = S^{-1/2} G_γ†G_γ S^{-1/2} with
//! Ginibre G_γ and S = Σ_γ G_γ†G_γ. The weight λ is calibrated per draw so
//! that the average cross-talk 1 − mean_γ ⟨γ|π^γ|γ⟩ equals the requested ε.

use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::{entropy_bits, TripletId};
use crate::linalg::{StateVector, C64};
use crate::montecarlo::haar_random_state;
use crate::mub::{Basis, BasisLabel, MubSet};
use crate::optimizer::table::{four_basis_reference_state, TABLE_ROWS};
use crate::rng::{child_seed, stream, Domain};
use crate::tolerance;

/// Draws of the random completion before an infeasible ε is reported.
const MAX_COMPLETION_DRAWS: usize = 64;

pub const DEFAULT_RESAMPLES: usize = 500;
pub const DEFAULT_SHOTS: u64 = 10_000;

/// Cross-talk of the first and last basis in catalog order.
pub const MEASURED_EPSILON_RANGE: (f64, f64) = (0.005, 0.019);

const ZERO: C64 = C64::new(0.0, 0.0);

type Operator<const D: usize> = [[C64; D]; D];

fn to_dmatrix<const D: usize>(m: &Operator<D>) -> DMatrix<C64> {
    DMatrix::from_fn(D, D, |i, j| m[i][j])
}

fn projector<const D: usize>(v: &[C64; D]) -> Operator<D> {
    std::array::from_fn(|i| std::array::from_fn(|j| v[i] * v[j].conj()))
}

/// ⟨v|m|v⟩, real part.
fn expectation<const D: usize>(m: &Operator<D>, v: &[C64; D]) -> f64 {
    let mut acc = ZERO;
    for i in 0..D {
        for j in 0..D {
            acc += v[i].conj() * m[i][j] * v[j];
        }
    }
    acc.re
}

#[derive(Clone, Debug, PartialEq)]
pub struct PovmElement<const D: usize> {
    matrix: Operator<D>,
}

impl<const D: usize> PovmElement<D> {
    /// Validates hermiticity and positivity.
    pub fn new(matrix: Operator<D>) -> Result<Self> {
        let e = Self { matrix };
        let h = e.hermiticity_error();
        if h > tolerance::POVM_HERMITICITY {
            return Err(Error::InvalidConfig(format!("POVM element is not Hermitian (deviation {h:e})")));
        }
        let m = e.min_eigenvalue();
        if m < tolerance::POVM_POSITIVITY {
            return Err(Error::InvalidConfig(format!("POVM element has eigenvalue {m:e}")));
        }
        Ok(e)
    }

    pub fn matrix(&self) -> &Operator<D> {
        &self.matrix
    }

    /// Tr(|ψ⟩⟨ψ| π).
    pub fn probability(&self, psi: &StateVector<D>) -> f64 {
        expectation(&self.matrix, psi.amplitudes())
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..D {
            for j in 0..D {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        to_dmatrix(&self.matrix).symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// The d outcomes of one basis measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisPovm<const D: usize> {
    pub label: BasisLabel,
    basis: Basis<D>,
    elements: Vec<PovmElement<D>>,
    /// Weight λ of the random completion.
    pub mixing: f64,
}

impl<const D: usize> BasisPovm<D> {
    pub fn elements(&self) -> &[PovmElement<D>] {
        &self.elements
    }

    /// Outcome probabilities, clamped at zero against round-off.
    pub fn probabilities(&self, psi: &StateVector<D>) -> [f64; D] {
        std::array::from_fn(|g| self.elements[g].probability(psi).max(0.0))
    }

    /// 1 − mean_γ ⟨γ|π^γ|γ⟩.
    pub fn cross_talk(&self) -> f64 {
        let hit: f64 = (0..D).map(|g| expectation(&self.elements[g].matrix, &self.basis.matrix.column(g))).sum();
        1.0 - hit / D as f64
    }

    /// max |Σ_γ π^γ − I|.
    pub fn completeness_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..D {
            for j in 0..D {
                let s: C64 = self.elements.iter().map(|e| e.matrix[i][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - id).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.elements.iter().map(PovmElement::min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.elements.iter().map(PovmElement::hermiticity_error).fold(0.0, f64::max)
    }
}

/// Rank-one projectors onto the basis columns.
pub fn ideal_povm<const D: usize>(basis: &Basis<D>) -> BasisPovm<D> {
    BasisPovm {
        label: basis.label,
        basis: *basis,
        elements: (0..D).map(|g| PovmElement { matrix: projector(&basis.matrix.column(g)) }).collect(),
        mixing: 0.0,
    }
}

fn ginibre_gram<const D: usize, R: Rng + ?Sized>(rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(D, D, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    g.adjoint() * g
}

/// Random POVM {M^γ} summing to the identity.
fn random_completion<const D: usize, R: Rng + ?Sized>(rng: &mut R) -> Vec<DMatrix<C64>> {
    let grams: Vec<DMatrix<C64>> = (0..D).map(|_| ginibre_gram::<D, R>(rng)).collect();
    let total = grams.iter().fold(DMatrix::zeros(D, D), |acc, g| acc + g);
    let eig = total.symmetric_eigen();
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(l.sqrt().recip(), 0.0)));
    let s = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    grams
        .iter()
        .map(|g| {
            let m = &s * g * &s;
            // Symmetrize away round-off.
            (&m + m.adjoint()).map(|z| z * 0.5)
        })
        .collect()
}

/// Noisy POVM with average cross-talk `epsilon`.
pub fn noisy_povm<const D: usize, R: Rng + ?Sized>(basis: &Basis<D>, epsilon: f64, rng: &mut R) -> Result<BasisPovm<D>> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidConfig(format!("cross-talk {epsilon} is not in [0, 1)")));
    }
    if epsilon == 0.0 {
        return Ok(ideal_povm(basis));
    }
    let cols: Vec<[C64; D]> = (0..D).map(|g| basis.matrix.column(g)).collect();
    for _ in 0..MAX_COMPLETION_DRAWS {
        let completion = random_completion::<D, R>(rng);
        let ops: Vec<Operator<D>> =
            completion.iter().map(|m| std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))).collect();
        let retained: f64 = ops.iter().zip(&cols).map(|(m, c)| expectation(m, c)).sum::<f64>() / D as f64;
        let lambda = epsilon / (1.0 - retained);
        if !(lambda < 1.0) {
            continue;
        }
        let elements = ops
            .iter()
            .zip(&cols)
            .map(|(m, c)| {
                let p = projector(c);
                PovmElement {
                    matrix: std::array::from_fn(|i| std::array::from_fn(|j| p[i][j] * (1.0 - lambda) + m[i][j] * lambda)),
                }
            })
            .collect();
        return Ok(BasisPovm { label: basis.label, basis: *basis, elements, mixing: lambda });
    }
    Err(Error::InvalidConfig(format!("no admissible completion for cross-talk {epsilon}")))
}

/// Per-basis cross-talk values.
#[derive(Clone, Debug, PartialEq)]
pub enum EpsilonProfile {
    /// 0.5 % on the first basis to 1.9 % on the last, linear in catalog order.
    Measured,
    Uniform(f64),
    PerBasis(Vec<f64>),
}

impl EpsilonProfile {
    pub fn values(&self, count: usize) -> Result<Vec<f64>> {
        match self {
            EpsilonProfile::Measured => {
                let (lo, hi) = MEASURED_EPSILON_RANGE;
                Ok((0..count)
                    .map(|i| if count == 1 { lo } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
                    .collect())
            }
            EpsilonProfile::Uniform(e) => Ok(vec![*e; count]),
            EpsilonProfile::PerBasis(v) if v.len() == count => Ok(v.clone()),
            EpsilonProfile::PerBasis(v) => Err(Error::DimensionMismatch { expected: count, got: v.len() }),
        }
    }
}

impl FromStr for EpsilonProfile {
    type Err = Error;

    /// `measured` (alias `paper`), a single value, or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("measured") || s.eq_ignore_ascii_case("paper") {
            return Ok(EpsilonProfile::Measured);
        }
        let values: Vec<f64> = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::InvalidConfig(format!("bad cross-talk value {v:?}"))))
            .collect::<Result<_>>()?;
        match values.as_slice() {
            [e] => Ok(EpsilonProfile::Uniform(*e)),
            _ => Ok(EpsilonProfile::PerBasis(values)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectorModel<const D: usize> {
    povms: Vec<BasisPovm<D>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelCheck {
    pub completeness_error: f64,
    pub min_eigenvalue: f64,
    pub hermiticity_error: f64,
}

impl ModelCheck {
    pub fn passed(&self) -> bool {
        self.completeness_error <= tolerance::POVM_COMPLETENESS
            && self.min_eigenvalue >= tolerance::POVM_POSITIVITY
            && self.hermiticity_error <= tolerance::POVM_HERMITICITY
    }
}

impl<const D: usize> DetectorModel<D> {
    pub fn ideal(set: &MubSet<D>) -> Self {
        Self { povms: set.bases().iter().map(ideal_povm).collect() }
    }

    /// Basis i draws its completion from stream `(seed, Povm, i)`.
    pub fn noisy(set: &MubSet<D>, profile: &EpsilonProfile, seed: u64) -> Result<Self> {
        let eps = profile.values(set.bases().len())?;
        let povms = set
            .bases()
            .iter()
            .zip(eps)
            .enumerate()
            .map(|(i, (b, e))| noisy_povm(b, e, &mut stream(seed, Domain::Povm, i as u64)))
            .collect::<Result<_>>()?;
        Ok(Self { povms })
    }

    pub fn povms(&self) -> &[BasisPovm<D>] {
        &self.povms
    }

    pub fn povm(&self, label: BasisLabel) -> Result<&BasisPovm<D>> {
        self.povms.iter().find(|p| p.label == label).ok_or(Error::InvalidLabel { label, dim: D })
    }

    pub fn check(&self) -> ModelCheck {
        ModelCheck {
            completeness_error: self.povms.iter().map(BasisPovm::completeness_error).fold(0.0, f64::max),
            min_eigenvalue: self.povms.iter().map(BasisPovm::min_eigenvalue).fold(f64::INFINITY, f64::min),
            hermiticity_error: self.povms.iter().map(BasisPovm::hermiticity_error).fold(0.0, f64::max),
        }
    }
}

/// Entropy sum observed with the model's POVMs.
pub fn predict_entropy_sum<const D: usize>(psi: &StateVector<D>, triplet: &TripletId, model: &DetectorModel<D>) -> Result<f64> {
    triplet.labels().iter().try_fold(0.0, |acc, &l| Ok(acc + entropy_bits(&model.povm(l)?.probabilities(psi))))
}

/// Counts of one basis measurement with per-channel standard deviations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub counts: Vec<u64>,
    pub total: u64,
    pub std_dev: Vec<f64>,
}

impl CountRecord {
    /// Shot-noise standard deviations √count.
    pub fn new(counts: Vec<u64>) -> Self {
        let std_dev = counts.iter().map(|&c| (c as f64).sqrt()).collect();
        Self { total: counts.iter().sum(), counts, std_dev }
    }

    pub fn with_std_dev(counts: Vec<u64>, std_dev: Vec<f64>) -> Result<Self> {
        if counts.len() != std_dev.len() {
            return Err(Error::DimensionMismatch { expected: counts.len(), got: std_dev.len() });
        }
        if std_dev.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidConfig("standard deviations must be finite and non-negative".into()));
        }
        Ok(Self { total: counts.iter().sum(), counts, std_dev })
    }

    pub fn frequencies(&self) -> Result<Vec<f64>> {
        if self.total == 0 {
            return Err(Error::ZeroCounts);
        }
        Ok(self.counts.iter().map(|&c| c as f64 / self.total as f64).collect())
    }
}

/// Multinomial counts by sequential binomial draws.
pub fn synthetic_counts<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Result<CountRecord> {
    let mut left = shots;
    let mut mass = 1.0;
    let mut counts = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        let c = if i + 1 == probs.len() || mass <= 0.0 {
            if i + 1 == probs.len() { left } else { 0 }
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).map_err(|e| Error::InvalidProbabilities(e.to_string()))?.sample(rng)
        };
        counts.push(c);
        left -= c;
        mass -= p;
    }
    Ok(CountRecord::new(counts))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyInterval {
    /// Entropy sum of the observed frequencies.
    pub point: f64,
    /// 10th percentile over resamples.
    pub low: f64,
    /// 90th percentile over resamples.
    pub high: f64,
}

/// Linear-interpolation percentile of sorted data, `q` in [0, 1].
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    match sorted.get(i + 1) {
        Some(next) => sorted[i] + frac * (next - sorted[i]),
        None => sorted[i],
    }
}

/// 10 %–90 % spread of the entropy sum when each channel is redrawn from a
/// normal with the record's mean and standard deviation, clamped at zero and
/// renormalized. Resample r uses stream `(seed, Bootstrap, r)`.
pub fn bootstrap_entropy_error(
    records: &[CountRecord],
    resamples: usize,
    seed: u64,
    execution: Execution,
) -> Result<EntropyInterval> {
    if resamples < 2 {
        return Err(Error::InvalidConfig("at least two resamples are required".into()));
    }
    let mut point = 0.0;
    for r in records {
        point += entropy_bits(&r.frequencies()?);
    }
    let mut values = execution.map_collect(resamples, |i| {
        let mut rng = stream(seed, Domain::Bootstrap, i as u64);
        records
            .iter()
            .map(|r| {
                let draws: Vec<f64> = r
                    .counts
                    .iter()
                    .zip(&r.std_dev)
                    .map(|(&c, &s)| {
                        let z: f64 = rng.sample(StandardNormal);
                        (c as f64 + s * z).max(0.0)
                    })
                    .collect();
                let total: f64 = draws.iter().sum();
                if total > 0.0 {
                    entropy_bits(&draws.iter().map(|d| d / total).collect::<Vec<_>>())
                } else {
                    0.0
                }
            })
            .sum::<f64>()
    });
    values.sort_by(f64::total_cmp);
    Ok(EntropyInterval { point, low: percentile(&values, 0.1), high: percentile(&values, 0.9) })
}

/// A named input state.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState<const D: usize> {
    pub id: String,
    pub state: StateVector<D>,
}

/// Eigenstates of the triplet's bases (`int-…`), of the other bases
/// (`ext-…`), Haar states, and in d = 5 the four-basis reference state and
/// the tabulated optimal state of the triplet when it has one.
pub fn default_state_family<const D: usize>(
    set: &MubSet<D>,
    triplet: &TripletId,
    random_states: usize,
    seed: u64,
) -> Vec<LabeledState<D>> {
    let mut out = Vec::new();
    for inside in [true, false] {
        for b in set.bases().iter().filter(|b| triplet.contains(b.label) == inside) {
            for j in 0..D {
                let prefix = if inside { "int" } else { "ext" };
                out.push(LabeledState { id: format!("{prefix}-{}{j}", b.label), state: b.eigenstate(j) });
            }
        }
    }
    for i in 0..random_states {
        let state = haar_random_state(&mut stream(seed, Domain::TestStates, i as u64));
        out.push(LabeledState { id: format!("haar-{i}"), state });
    }
    if D == 5 {
        let lift = |s: StateVector<5>| StateVector::<D>::from_slice(s.amplitudes()).expect("D is 5");
        out.push(LabeledState { id: "four-basis".into(), state: lift(four_basis_reference_state()) });
        let name = triplet.to_string();
        if let Some(row) = TABLE_ROWS.iter().find(|r| r.triplet == name) {
            out.push(LabeledState { id: format!("table-{name}"), state: lift(row.state()) });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatePrediction {
    pub state_id: String,
    pub triplet: TripletId,
    pub ideal_entropy_sum: f64,
    pub predicted_entropy_sum: f64,
    pub err_low: f64,
    pub err_high: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictionConfig {
    pub shots: u64,
    pub resamples: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for PredictionConfig {
    fn default() -> Self {
        Self { shots: DEFAULT_SHOTS, resamples: DEFAULT_RESAMPLES, seed: 0x5eed, execution: Execution::Parallel }
    }
}

/// Ideal and predicted entropy sums per state, with error bars from a
/// bootstrap of synthetic counts drawn from the predicted distributions.
pub fn predict_states<const D: usize>(
    set: &MubSet<D>,
    model: &DetectorModel<D>,
    triplet: &TripletId,
    states: &[LabeledState<D>],
    cfg: &PredictionConfig,
) -> Result<Vec<StatePrediction>> {
    if cfg.shots == 0 {
        return Err(Error::ZeroCounts);
    }
    let bases = set.select(&triplet.labels())?;
    let povms: Vec<&BasisPovm<D>> = triplet.labels().iter().map(|&l| model.povm(l)).collect::<Result<_>>()?;
    states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let ideal = crate::functionals::entropy_sum(&s.state, &bases)?;
            let mut predicted = 0.0;
            let mut records = Vec::with_capacity(3);
            let mut rng = stream(cfg.seed, Domain::Counts, i as u64);
            for p in &povms {
                let probs = p.probabilities(&s.state);
                predicted += entropy_bits(&probs);
                records.push(synthetic_counts(&probs, cfg.shots, &mut rng)?);
            }
            let interval = bootstrap_entropy_error(&records, cfg.resamples, child_seed(cfg.seed, i as u64), cfg.execution)?;
            Ok(StatePrediction {
                state_id: s.id.clone(),
                triplet: *triplet,
                ideal_entropy_sum: ideal,
                predicted_entropy_sum: predicted,
                err_low: interval.low,
                err_high: interval.high,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::born_probabilities;

    fn set5() -> MubSet<5> {
        MubSet::standard().unwrap()
    }

    #[test]
    fn ideal_projector_and_completeness() {
        let set = set5();
        let povm = ideal_povm(set.basis(BasisLabel::A).unwrap());
        let m = povm.elements()[0].matrix();
        assert_eq!(m[0][0], C64::new(1.0, 0.0));
        assert_eq!(m.iter().flatten().filter(|z| z.norm() > 0.0).count(), 1);
        assert!(povm.completeness_error() < 1e-15);
    }

    #[test]
    fn ideal_matches_born() {
        let set = set5();
        let f = set.basis(BasisLabel::F).unwrap();
        let povm = ideal_povm(f);
        for i in 0..200 {
            let psi: StateVector<5> = haar_random_state(&mut stream(1, Domain::TestStates, i));
            let born = born_probabilities(&psi, &f.matrix);
            for (a, b) in povm.probabilities(&psi).iter().zip(born.probs()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn noisy_povm_properties() {
        let set = set5();
        let f = set.basis(BasisLabel::F).unwrap();
        for i in 0..20 {
            let povm = noisy_povm(f, 0.019, &mut stream(2, Domain::Povm, i)).unwrap();
            assert!(povm.completeness_error() < tolerance::POVM_COMPLETENESS);
            assert!(povm.min_eigenvalue() >= tolerance::POVM_POSITIVITY);
            assert!((povm.cross_talk() - 0.019).abs() < 1e-12);
        }
        assert_eq!(noisy_povm(f, 0.0, &mut stream(2, Domain::Povm, 0)).unwrap(), ideal_povm(f));
        assert!(noisy_povm(f, 1.0, &mut stream(2, Domain::Povm, 0)).is_err());
    }

    #[test]
    fn profile_values() {
        let v = EpsilonProfile::Measured.values(6).unwrap();
        assert_eq!(v[0], 0.005);
        assert!((v[5] - 0.019).abs() < 1e-15);
        assert_eq!("0.01".parse::<EpsilonProfile>().unwrap(), EpsilonProfile::Uniform(0.01));
        assert!("0.1,0.2".parse::<EpsilonProfile>().unwrap().values(6).is_err());
        assert!("x".parse::<EpsilonProfile>().is_err());
        assert_eq!("paper".parse::<EpsilonProfile>().unwrap(), EpsilonProfile::Measured);
    }

    #[test]
    fn ideal_model_prediction() {
        let set = set5();
        let model = DetectorModel::ideal(&set);
        let a0 = StateVector::<5>::basis_state(0);
        let v = predict_entropy_sum(&a0, &TripletId::parse("ABC").unwrap(), &model).unwrap();
        assert!((v - 2.0 * 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn noise_raises_internal_eigenstate() {
        let set = set5();
        let model = DetectorModel::noisy(&set, &EpsilonProfile::Uniform(0.01), 3).unwrap();
        let a0 = StateVector::<5>::basis_state(0);
        let v = predict_entropy_sum(&a0, &TripletId::parse("ABC").unwrap(), &model).unwrap();
        assert!(v > 2.0 * 5f64.log2());
    }

    #[test]
    fn table_state_under_noise_stays_between_bounds() {
        let set = set5();
        let model = DetectorModel::noisy(&set, &EpsilonProfile::Uniform(0.01), 4).unwrap();
        let row = TABLE_ROWS.iter().find(|r| r.triplet == "ABE").unwrap();
        let v = predict_entropy_sum(&row.state(), &row.triplet_id(), &model).unwrap();
        assert!(v > crate::bounds::S2_ENTROPY && v < 2.0 * 5f64.log2(), "{v}");
    }

    #[test]
    fn bootstrap_degenerate_and_deterministic() {
        let recs = vec![
            CountRecord::with_std_dev(vec![10, 20, 30, 40, 0], vec![0.0; 5]).unwrap(),
            CountRecord::with_std_dev(vec![5, 5, 5, 5, 5], vec![0.0; 5]).unwrap(),
        ];
        let i = bootstrap_entropy_error(&recs, 50, 1, Execution::Parallel).unwrap();
        assert!((i.low - i.point).abs() < 1e-12 && (i.high - i.point).abs() < 1e-12);

        let recs = vec![CountRecord::new(vec![100, 200, 300, 400, 50])];
        let a = bootstrap_entropy_error(&recs, 500, 9, Execution::Parallel).unwrap();
        let b = bootstrap_entropy_error(&recs, 500, 9, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert!(a.low < a.point && a.point < a.high);
    }

    #[test]
    fn bootstrap_errors() {
        let zero = vec![CountRecord::new(vec![0; 5])];
        assert!(matches!(bootstrap_entropy_error(&zero, 10, 1, Execution::Sequential), Err(Error::ZeroCounts)));
        let ok = vec![CountRecord::new(vec![1; 5])];
        assert!(bootstrap_entropy_error(&ok, 1, 1, Execution::Sequential).is_err());
    }

    #[test]
    fn synthetic_counts_sum_to_shots() {
        let mut rng = stream(5, Domain::Counts, 0);
        let r = synthetic_counts(&[0.1, 0.0, 0.5, 0.4], 1000, &mut rng).unwrap();
        assert_eq!(r.total, 1000);
        assert_eq!(r.counts[1], 0);
        assert_eq!(r.counts.iter().sum::<u64>(), 1000);
    }

    #[test]
    fn percentile_interpolates() {
        let v = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        assert_eq!(percentile(&v, 0.1), 1.0);
        assert_eq!(percentile(&v, 0.95), 9.5);
        assert_eq!(percentile(&[3.0], 0.9), 3.0);
    }

    #[test]
    fn default_family_contents() {
        let set = set5();
        let fam = default_state_family(&set, &TripletId::parse("ABE").unwrap(), 3, 1);
        assert_eq!(fam.iter().filter(|s| s.id.starts_with("int-")).count(), 15);
        assert_eq!(fam.iter().filter(|s| s.id.starts_with("ext-")).count(), 15);
        assert!(fam.iter().any(|s| s.id == "table-ABE"));
        assert!(fam.iter().any(|s| s.id == "four-basis"));
        let fam4 = default_state_family(&MubSet::<4>::standard().unwrap(), &TripletId::parse("ABC").unwrap(), 2, 1);
        assert_eq!(fam4.len(), 5 * 4 + 2);
    }

    #[test]
    fn predictions_with_zero_noise_match_ideal() {
        let set = set5();
        let t = TripletId::parse("DEF").unwrap();
        let states = default_state_family(&set, &t, 5, 2);
        let cfg = PredictionConfig { resamples: 20, shots: 500, ..Default::default() };
        let preds = predict_states(&set, &DetectorModel::ideal(&set), &t, &states, &cfg).unwrap();
        for p in preds {
            assert!((p.ideal_entropy_sum - p.predicted_entropy_sum).abs() < 1e-12, "{p:?}");
        }
    }
}
