//! Triplet classification and the d = 5 class automorphisms.
//!
//! The non-computational bases of the d = 5 catalog are U^{n_T}·Φ with
//! U = diag(ω^{j²}) and n_B = 0, n_C = 1, n_E = 2, n_D = 3, n_F = 4. Elements
//! V = U^N Φ^M U^L map bases to bases up to phases and outcome permutations,
//! and therefore map the probability-vector triplets of each class onto
//! triplets of the same class.

use std::fmt;

use serde::Serialize;

use crate::bounds::{reference_class, ClassId};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::{FunctionalKind, TripletId};
use crate::linalg::{born_raw, StateVector, UnitaryMatrix, C64};
use crate::montecarlo::haar_random_state;
use crate::mub::{fourier, generator_power, phase_unitary, BasisLabel, MubSet};
use crate::optimizer::table::TABLE_ROWS;
use crate::optimizer::{minimize_sum, OptimizerConfig};
use crate::record::StateRecord;
use crate::rng::{stream, Domain};
use crate::tolerance;

/// All triplets of a complete set in lexicographic order.
pub fn enumerate_triplets(dim: usize) -> Result<Vec<TripletId>> {
    match dim {
        4 | 5 => Ok(TripletId::all(dim)),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// All permutations of 0..n in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

// ---------------------------------------------------------------------------
// Classification

/// Class predicted from the phase indices n_T.
///
/// With A in the triplet the other two indices differ by Δn ≡ ±1 (S1) or
/// ±2 (S2) mod 5. Without A, three cyclically consecutive indices (two
/// pairwise differences ≡ ±1) give S2, otherwise S1.
pub fn classify_by_delta_n(triplet: &TripletId) -> Result<ClassId> {
    let adjacent = |a: u8, b: u8| matches!((a + 5 - b) % 5, 1 | 4);
    let powers: Vec<u8> = triplet.labels().iter().filter_map(|&l| generator_power(l)).collect();
    match powers.as_slice() {
        [a, b] => Ok(if adjacent(*a, *b) { ClassId::S1 } else { ClassId::S2 }),
        [a, b, c] => {
            let n = [adjacent(*a, *b), adjacent(*b, *c), adjacent(*a, *c)].iter().filter(|&&x| x).count();
            Ok(if n == 2 { ClassId::S2 } else { ClassId::S1 })
        }
        _ => Err(Error::InvalidConfig(format!("triplet {triplet} has no phase indices"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripletClassification {
    pub triplet: TripletId,
    pub entropy_minimum: f64,
    pub variance_minimum: f64,
    /// Class whose entropy bound the minimum reaches; `None` if neither.
    pub class: Option<ClassId>,
    pub reference_class: Option<ClassId>,
    /// Δn prediction (d = 5 only).
    pub delta_n_class: Option<ClassId>,
    pub variance_matches_class: bool,
    pub converged: bool,
    pub entropy_argmin: StateRecord,
    pub variance_argmin: StateRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub entries: Vec<TripletClassification>,
    pub classes: Vec<ClassSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassSummary {
    pub class: ClassId,
    pub bound_entropy: f64,
    pub bound_variance: f64,
    /// Smallest certified minima over the members.
    pub certified_entropy: f64,
    pub certified_variance: f64,
    pub members: Vec<TripletId>,
}

impl ClassificationReport {
    /// Every triplet reached a known bound, the partition equals the
    /// reference one, and the Δn rule agrees.
    pub fn entropy_consistent(&self) -> bool {
        self.entries.iter().all(|e| {
            e.class.is_some()
                && e.class == e.reference_class
                && (self.dim != 5 || e.delta_n_class == e.class)
        })
    }

    pub fn variance_consistent(&self) -> bool {
        self.entries.iter().all(|e| e.variance_matches_class)
    }

    pub fn passed(&self) -> bool {
        self.entropy_consistent() && self.variance_consistent() && self.entries.iter().all(|e| e.converged)
    }

    pub fn members(&self, class: ClassId) -> Vec<TripletId> {
        self.entries.iter().filter(|e| e.class == Some(class)).map(|e| e.triplet).collect()
    }
}

fn classes_for(dim: usize) -> &'static [ClassId] {
    if dim == 4 {
        &[ClassId::Uniform]
    } else {
        &[ClassId::S1, ClassId::S2]
    }
}

/// Certifies entropy and variance minima of each triplet and assigns the
/// class whose entropy bound the minimum reaches within 1e-3.
pub fn classify_by_optimization<const D: usize>(
    set: &MubSet<D>,
    triplets: &[TripletId],
    cfg: &OptimizerConfig,
) -> Result<ClassificationReport> {
    let mut entries = Vec::with_capacity(triplets.len());
    for t in triplets {
        let labels = t.labels();
        let ent = minimize_sum(set, FunctionalKind::ShannonEntropySum, &labels, cfg)?;
        let var = minimize_sum(set, FunctionalKind::MinVarianceSum, &labels, cfg)?;
        let class = classes_for(D)
            .iter()
            .copied()
            .find(|c| (ent.minimum - c.entropy_bound()).abs() <= tolerance::CLASS_BOUND);
        let variance_matches_class = class
            .is_some_and(|c| (var.minimum - c.variance_bound()).abs() <= tolerance::VARIANCE_CLASS_BOUND);
        entries.push(TripletClassification {
            triplet: *t,
            entropy_minimum: ent.minimum,
            variance_minimum: var.minimum,
            class,
            reference_class: reference_class(D, t),
            delta_n_class: if D == 5 { classify_by_delta_n(t).ok() } else { None },
            variance_matches_class,
            converged: ent.converged && var.converged,
            entropy_argmin: StateRecord::from(&ent.argmin),
            variance_argmin: StateRecord::from(&var.argmin),
        });
    }
    let classes = classes_for(D)
        .iter()
        .map(|&c| {
            let members: Vec<&TripletClassification> = entries.iter().filter(|e| e.class == Some(c)).collect();
            ClassSummary {
                class: c,
                bound_entropy: c.entropy_bound(),
                bound_variance: c.variance_bound(),
                certified_entropy: members.iter().map(|e| e.entropy_minimum).fold(f64::INFINITY, f64::min),
                certified_variance: members.iter().map(|e| e.variance_minimum).fold(f64::INFINITY, f64::min),
                members: members.iter().map(|e| e.triplet).collect(),
            }
        })
        .collect();
    Ok(ClassificationReport { dim: D, entries, classes })
}

// ---------------------------------------------------------------------------
// Fourier identities

/// Least-squares phase θ minimizing Σ|target − e^{iθ} candidate|².
fn fitted_phase(candidate: &[C64], target: &[C64]) -> f64 {
    candidate.iter().zip(target).map(|(c, t)| c.conj() * t).sum::<C64>().arg()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Permutation (e_k → e_{p[k]}) minimizing the global-phase residual.
    pub permutation: Vec<usize>,
    pub global_phase: f64,
    /// max |lhs − e^{iθ} rhs| with a single phase.
    pub strict_residual: f64,
    /// Permutation minimizing the residual when each column carries its own
    /// phase (rhs multiplied by a diagonal phase matrix).
    pub monomial_permutation: Vec<usize>,
    pub column_phases: Vec<f64>,
    pub monomial_residual: f64,
}

impl IdentityCheck {
    pub fn holds_strictly(&self) -> bool {
        self.strict_residual < tolerance::FOURIER_IDENTITY
    }

    pub fn holds_up_to_phases(&self) -> bool {
        self.monomial_residual < tolerance::FOURIER_IDENTITY
    }
}

/// Searches permutations P for `lhs = e^{iθ} rhs(P)` and for
/// `lhs = rhs(P)·diag(e^{iθ_k})`.
fn check_identity(name: &str, lhs: &UnitaryMatrix<5>, rhs: impl Fn(&UnitaryMatrix<5>) -> UnitaryMatrix<5>) -> IdentityCheck {
    let target: Vec<C64> = lhs.entries().iter().flatten().copied().collect();
    let mut best = IdentityCheck {
        name: name.to_string(),
        permutation: Vec::new(),
        global_phase: 0.0,
        strict_residual: f64::INFINITY,
        monomial_permutation: Vec::new(),
        column_phases: Vec::new(),
        monomial_residual: f64::INFINITY,
    };
    for perm in permutations(5) {
        let p: [usize; 5] = perm.clone().try_into().expect("length 5");
        let r = rhs(&UnitaryMatrix::permutation(&p));
        let cand: Vec<C64> = r.entries().iter().flatten().copied().collect();

        let theta = fitted_phase(&cand, &target);
        let rot = C64::from_polar(1.0, theta);
        let strict = cand.iter().zip(&target).map(|(c, t)| (t - rot * c).norm()).fold(0.0, f64::max);
        if strict < best.strict_residual {
            best.strict_residual = strict;
            best.permutation = perm.clone();
            best.global_phase = theta;
        }

        let mut phases = Vec::with_capacity(5);
        let mut monomial: f64 = 0.0;
        for col in 0..5 {
            let c = r.column(col);
            let t = lhs.column(col);
            let phi = fitted_phase(&c, &t);
            let rot = C64::from_polar(1.0, phi);
            monomial = c.iter().zip(&t).map(|(c, t)| (t - rot * c).norm()).fold(monomial, f64::max);
            phases.push(phi);
        }
        if monomial < best.monomial_residual {
            best.monomial_residual = monomial;
            best.monomial_permutation = perm;
            best.column_phases = phases;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FourierIdentityReport {
    /// Φ†UΦ = U Φ P U
    pub first: IdentityCheck,
    /// Φ†U²Φ = U³ Φ U² P′
    pub second: IdentityCheck,
    /// Φ†UΦ against U P, which must fail.
    pub control: IdentityCheck,
}

impl FourierIdentityReport {
    /// The first identity holds with a single global phase, the second up
    /// to a diagonal phase matrix, and the control is rejected.
    pub fn passed(&self) -> bool {
        self.first.holds_strictly()
            && self.second.holds_up_to_phases()
            && !self.control.holds_strictly()
            && !self.control.holds_up_to_phases()
    }
}

pub fn verify_fourier_identities() -> FourierIdentityReport {
    let u = phase_unitary();
    let phi = fourier::<5>();
    let phi_dag = phi.adjoint();
    let lhs1 = phi_dag.matmul(&u).matmul(&phi);
    let lhs2 = phi_dag.matmul(&u.pow(2)).matmul(&phi);
    FourierIdentityReport {
        first: check_identity("phi^dag U phi = U phi P U", &lhs1, |p| u.matmul(&phi).matmul(p).matmul(&u)),
        second: check_identity("phi^dag U^2 phi = U^3 phi U^2 P'", &lhs2, |p| {
            u.pow(3).matmul(&phi).matmul(&u.pow(2)).matmul(p)
        }),
        control: check_identity("control: phi^dag U phi = U P", &lhs1, |p| u.matmul(p)),
    }
}

// ---------------------------------------------------------------------------
// Class automorphisms

/// V = U^N Φ^M U^L.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AutomorphismElement {
    pub n: u8,
    pub m: i8,
    pub l: u8,
}

impl AutomorphismElement {
    pub const IDENTITY: Self = Self { n: 0, m: 0, l: 0 };

    pub fn new(n: i64, m: i8, l: i64) -> Result<Self> {
        if !(-1..=1).contains(&m) {
            return Err(Error::InvalidConfig(format!("Fourier power {m} is not in {{-1, 0, 1}}")));
        }
        Ok(Self { n: n.rem_euclid(5) as u8, m, l: l.rem_euclid(5) as u8 })
    }

    /// The 75 elements, N and L mod 5 and M ∈ {−1, 0, 1}.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(75);
        for n in 0..5 {
            for m in -1..=1 {
                for l in 0..5 {
                    out.push(Self { n, m, l });
                }
            }
        }
        out
    }

    pub fn matrix(&self) -> UnitaryMatrix<5> {
        let u = phase_unitary();
        u.pow(self.n as i64).matmul(&fourier::<5>().pow(self.m as i64)).matmul(&u.pow(self.l as i64))
    }
}

impl fmt::Display for AutomorphismElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U^{} F^{} U^{}", self.n, self.m, self.l)
    }
}

/// Permutation σ with `a[σ[j]] ≈ b[j]` for all j, if one exists within `tol`.
///
/// Sorting is optimal for the max-norm assignment on the real line, so the
/// sorted comparison is exact as a filter; the permutation built from the two
/// orderings is then checked explicitly.
pub fn match_up_to_permutation<const D: usize>(a: &[f64; D], b: &[f64; D], tol: f64) -> Option<[usize; D]> {
    let mut ia: [usize; D] = std::array::from_fn(|k| k);
    let mut ib = ia;
    ia.sort_by(|&x, &y| a[x].total_cmp(&a[y]));
    ib.sort_by(|&x, &y| b[x].total_cmp(&b[y]));
    if ia.iter().zip(&ib).any(|(&x, &y)| (a[x] - b[y]).abs() > tol) {
        return None;
    }
    let mut sigma = [0; D];
    for (&x, &y) in ia.iter().zip(&ib) {
        sigma[y] = x;
    }
    (0..D).all(|j| (a[sigma[j]] - b[j]).abs() <= tol).then_some(sigma)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AutomorphismTally {
    pub checks: u64,
    /// Triplets with no same-class image.
    pub violations: u64,
    /// Triplets whose image matches no triplet at all.
    pub unmatched: u64,
}

impl AutomorphismTally {
    fn add(mut self, other: Self) -> Self {
        self.checks += other.checks;
        self.violations += other.violations;
        self.unmatched += other.unmatched;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripletImage {
    pub triplet: TripletId,
    pub image: Option<TripletId>,
    pub same_class: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutomorphismReport {
    pub element: AutomorphismElement,
    pub label: String,
    pub tally: AutomorphismTally,
    /// Image of each triplet on the first trial state.
    pub images: Vec<TripletImage>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub elements: Vec<AutomorphismReport>,
    pub total: AutomorphismTally,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.total.violations == 0 && self.total.checks > 0
    }
}

struct LemmaContext {
    bases: Vec<UnitaryMatrix<5>>,
    labels: Vec<BasisLabel>,
    triplets: Vec<(TripletId, [usize; 3], Option<ClassId>)>,
}

impl LemmaContext {
    fn new(set: &MubSet<5>) -> Self {
        let labels = set.labels();
        let triplets = TripletId::all(5)
            .into_iter()
            .filter_map(|t| {
                let idx = t.labels().map(|l| labels.iter().position(|&x| x == l));
                let idx = [idx[0]?, idx[1]?, idx[2]?];
                Some((t, idx, reference_class(5, &t)))
            })
            .collect();
        Self { bases: set.bases().iter().map(|b| b.matrix).collect(), labels, triplets }
    }

    fn probabilities(&self, amps: &[C64; 5]) -> Vec<[f64; 5]> {
        self.bases.iter().map(|m| born_raw(amps, m)).collect()
    }

    /// For each triplet, the image triplet of `psi` under `v` (a same-class
    /// one when several match) and whether it exists at all.
    fn images(&self, p: &[[f64; 5]], v: &UnitaryMatrix<5>, psi: &StateVector<5>) -> Vec<(Option<usize>, bool)> {
        let q = self.probabilities(&v.apply_raw(psi.amplitudes()));
        let nb = self.bases.len();
        let mut matches = vec![false; nb * nb];
        for x in 0..nb {
            for y in 0..nb {
                matches[x * nb + y] = match_up_to_permutation(&p[y], &q[x], tolerance::AUTOMORPHISM_MATCH).is_some();
            }
        }
        let assignments = permutations(3);
        self.triplets
            .iter()
            .map(|(_, idx, class)| {
                let mut any = None;
                for (j, (_, jdx, jclass)) in self.triplets.iter().enumerate() {
                    let hit = assignments.iter().any(|a| (0..3).all(|k| matches[idx[k] * nb + jdx[a[k]]]));
                    if hit {
                        if jclass == class {
                            return (Some(j), true);
                        }
                        any.get_or_insert(j);
                    }
                }
                (any, false)
            })
            .collect()
    }
}

fn tally_trial(ctx: &LemmaContext, mats: &[UnitaryMatrix<5>], seed: u64, trial: usize) -> Vec<AutomorphismTally> {
    let psi: StateVector<5> = haar_random_state(&mut stream(seed, Domain::LemmaTrial, trial as u64));
    let p = ctx.probabilities(psi.amplitudes());
    mats.iter()
        .map(|v| {
            let mut t = AutomorphismTally::default();
            for (image, same) in ctx.images(&p, v, &psi) {
                t.checks += 1;
                t.violations += u64::from(!same);
                t.unmatched += u64::from(image.is_none());
            }
            t
        })
        .collect()
}

/// Checks the given elements on `trials` Haar states and all triplets.
pub fn verify_automorphisms(
    set: &MubSet<5>,
    elements: &[AutomorphismElement],
    trials: usize,
    seed: u64,
    execution: Execution,
) -> Result<LemmaReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("at least one trial is required".into()));
    }
    let ctx = LemmaContext::new(set);
    if ctx.labels.len() != 6 {
        return Err(Error::BasisCount { min: 6, max: 6, got: ctx.labels.len() });
    }
    let mats: Vec<UnitaryMatrix<5>> = elements.iter().map(AutomorphismElement::matrix).collect();
    let totals = execution.map_reduce(
        trials,
        || vec![AutomorphismTally::default(); mats.len()],
        |i| tally_trial(&ctx, &mats, seed, i),
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.add(y)).collect(),
    );

    let psi0: StateVector<5> = haar_random_state(&mut stream(seed, Domain::LemmaTrial, 0));
    let p0 = ctx.probabilities(psi0.amplitudes());
    let reports: Vec<AutomorphismReport> = elements
        .iter()
        .zip(&mats)
        .zip(totals)
        .map(|((e, v), tally)| AutomorphismReport {
            element: *e,
            label: e.to_string(),
            tally,
            images: ctx
                .images(&p0, v, &psi0)
                .into_iter()
                .zip(&ctx.triplets)
                .map(|((img, same), (t, _, _))| TripletImage {
                    triplet: *t,
                    image: img.map(|j| ctx.triplets[j].0),
                    same_class: same,
                })
                .collect(),
        })
        .collect();
    let total = reports.iter().fold(AutomorphismTally::default(), |a, r| a.add(r.tally));
    Ok(LemmaReport { trials, seed, tolerance: tolerance::AUTOMORPHISM_MATCH, elements: reports, total })
}

pub fn verify_class_automorphism(
    set: &MubSet<5>,
    element: AutomorphismElement,
    trials: usize,
    seed: u64,
    execution: Execution,
) -> Result<AutomorphismReport> {
    let mut r = verify_automorphisms(set, &[element], trials, seed, execution)?;
    Ok(r.elements.remove(0))
}

/// All 75 elements.
pub fn verify_lemma(set: &MubSet<5>, trials: usize, seed: u64, execution: Execution) -> Result<LemmaReport> {
    verify_automorphisms(set, &AutomorphismElement::all(), trials, seed, execution)
}

// ---------------------------------------------------------------------------
// Relations between tabulated states

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateRelation {
    pub from: String,
    pub to: String,
    pub element: AutomorphismElement,
    /// Output permutation applied after V (e_k → e_{p[k]}).
    pub permutation: Vec<usize>,
    pub global_phase: f64,
    /// max_k |e^{iθ} (P V ψ_from)_k − (ψ_to)_k|
    pub residual: f64,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRelationReport {
    pub tolerance: f64,
    pub pairs: Vec<StateRelation>,
    pub matched_pairs: usize,
    /// Rows linked by chains of matched pairs; one group means every pair is
    /// related by a product of elements.
    pub connected_groups: Vec<Vec<String>>,
    /// Each row against itself; must match with the identity.
    pub self_checks: Vec<StateRelation>,
    /// A Haar-random state against each row; must not match.
    pub controls: Vec<StateRelation>,
}

impl TableRelationReport {
    /// Self-matches succeed and controls fail. Unmatched row pairs are
    /// findings, not failures.
    pub fn controls_passed(&self) -> bool {
        self.self_checks.iter().all(|r| r.matched) && self.controls.iter().all(|r| !r.matched)
    }
}

fn best_relation(
    from: (&str, &StateVector<5>),
    to: (&str, &StateVector<5>),
    elements: &[(AutomorphismElement, UnitaryMatrix<5>)],
    perms: &[[usize; 5]],
    tol: f64,
) -> StateRelation {
    let target = to.1.amplitudes();
    let mut best = StateRelation {
        from: from.0.to_string(),
        to: to.0.to_string(),
        element: AutomorphismElement::IDENTITY,
        permutation: (0..5).collect(),
        global_phase: 0.0,
        residual: f64::INFINITY,
        matched: false,
    };
    for (e, v) in elements {
        let w = v.apply_raw(from.1.amplitudes());
        for p in perms {
            let mut pw = [C64::new(0.0, 0.0); 5];
            for k in 0..5 {
                pw[p[k]] = w[k];
            }
            let theta = fitted_phase(&pw, target);
            let rot = C64::from_polar(1.0, theta);
            let r = pw.iter().zip(target).map(|(a, b)| (b - rot * a).norm()).fold(0.0, f64::max);
            if r < best.residual {
                best.residual = r;
                best.element = *e;
                best.permutation = p.to_vec();
                best.global_phase = theta;
            }
        }
    }
    best.matched = best.residual <= tol;
    best
}

/// Searches V × output permutation × global phase relating each pair of
/// tabulated states.
pub fn verify_table_state_relations(seed: u64) -> TableRelationReport {
    let tol = tolerance::TABLE_RELATION;
    let elements: Vec<(AutomorphismElement, UnitaryMatrix<5>)> =
        AutomorphismElement::all().into_iter().map(|e| (e, e.matrix())).collect();
    let perms: Vec<[usize; 5]> = permutations(5).into_iter().map(|p| p.try_into().expect("length 5")).collect();
    let rows: Vec<(String, StateVector<5>)> = TABLE_ROWS.iter().map(|r| (r.triplet.to_string(), r.state())).collect();

    let mut pairs = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            pairs.push(best_relation((&a.0, &a.1), (&b.0, &b.1), &elements, &perms, tol));
        }
    }
    let self_checks = rows.iter().map(|(n, s)| best_relation((n, s), (n, s), &elements, &perms, tol)).collect();
    let haar: StateVector<5> = haar_random_state(&mut stream(seed, Domain::TestStates, 0));
    let controls =
        rows.iter().map(|(n, s)| best_relation(("haar", &haar), (n, s), &elements, &perms, tol)).collect();
    let matched_pairs = pairs.iter().filter(|p: &&StateRelation| p.matched).count();
    let names: Vec<String> = rows.into_iter().map(|(n, _)| n).collect();
    let connected_groups = connected_groups(&names, &pairs);
    TableRelationReport { tolerance: tol, pairs, matched_pairs, connected_groups, self_checks, controls }
}

fn connected_groups(names: &[String], pairs: &[StateRelation]) -> Vec<Vec<String>> {
    let mut group: Vec<usize> = (0..names.len()).collect();
    let index = |n: &str| names.iter().position(|x| x == n).expect("pair of known rows");
    for p in pairs.iter().filter(|p| p.matched) {
        let (a, b) = (group[index(&p.from)], group[index(&p.to)]);
        for g in group.iter_mut().filter(|g| **g == b) {
            *g = a;
        }
    }
    let mut out: Vec<Vec<String>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &g) in group.iter().enumerate() {
        match seen.iter().position(|&s| s == g) {
            Some(k) => out[k].push(names[i].clone()),
            None => {
                seen.push(g);
                out.push(vec![names[i].clone()]);
            }
        }
    }
    out
}
