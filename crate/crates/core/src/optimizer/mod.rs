//! Certification of uncertainty bounds by multistart simplex minimization
//! over the normalized state parametrization.
//!
//! Each restart starts from a Haar-random state drawn from its own RNG stream
//! `(seed, Restart, index)`, runs Nelder–Mead to the function tolerance and
//! then re-seeds the simplex at the best point until a polish round stops
//! improving. The reported minimum is the functional evaluated at the
//! returned state, so it is always an attained value (an upper bound on the
//! true infimum).

mod params;
mod simplex;
pub mod table;

use serde::{Deserialize, Serialize};

pub use params::{params_to_state, state_to_params, Parametrization, StateParams};
pub use simplex::{nelder_mead, SimplexOptions, SimplexOutcome};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functionals::{evaluate_raw, FunctionalKind};
use crate::linalg::StateVector;
use crate::montecarlo::haar_random_state;
use crate::mub::{Basis, BasisLabel, MubSet};
use crate::rng::{stream, Domain};
use crate::tolerance;

/// Polish rounds after the first simplex run of a restart.
const MAX_POLISH_ROUNDS: usize = 4;
/// Polish simplex edge relative to the initial one.
const POLISH_STEP_FACTOR: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Simplex iterations per run.
    pub max_iterations: usize,
    pub function_tolerance: f64,
    /// Initial simplex edge, radians.
    pub simplex_scale: f64,
    pub seed: u64,
    /// Permuted-slot passes run by [`reparametrized_cross_check`]; each is
    /// repeated in another basis of the set.
    pub permutation_reparametrizations: usize,
    #[serde(default)]
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_iterations: 4000,
            function_tolerance: 1e-9,
            simplex_scale: 0.4,
            seed: 0x5eed,
            permutation_reparametrizations: 2,
            execution: Execution::Parallel,
        }
    }
}

impl OptimizerConfig {
    /// Defaults sized for `k` bases: 200 restarts up to triplets, 500 beyond.
    pub fn for_tuple_size(k: usize) -> Self {
        let restarts = if k >= 4 { 500 } else { 200 };
        Self { restarts, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.function_tolerance > 0.0) || !(self.simplex_scale > 0.0) {
            return Err(Error::InvalidConfig("tolerances and simplex scale must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult<const D: usize> {
    pub minimum: f64,
    pub argmin: StateVector<D>,
    pub functional: FunctionalKind,
    pub bases: Vec<BasisLabel>,
    pub restarts_used: usize,
    pub best_restart_index: usize,
    pub converged: bool,
    /// Best value found up to and including each restart.
    pub best_so_far: Vec<f64>,
    /// Objective evaluations over all restarts.
    pub evaluations: u64,
}

#[derive(Clone, Debug)]
struct RestartOutcome<const D: usize> {
    value: f64,
    state: StateVector<D>,
    converged: bool,
    evaluations: u64,
}

fn run_restart<const D: usize>(
    functional: FunctionalKind,
    bases: &[Basis<D>],
    param: &Parametrization<D>,
    cfg: &OptimizerConfig,
    index: usize,
) -> RestartOutcome<D> {
    let mut rng = stream(cfg.seed, Domain::Restart, index as u64);
    let start: StateVector<D> = haar_random_state(&mut rng);
    let objective = |x: &[f64]| evaluate_raw(functional, param.state(x).amplitudes(), bases);

    let mut opts = SimplexOptions {
        max_iterations: cfg.max_iterations,
        function_tolerance: cfg.function_tolerance,
        initial_step: cfg.simplex_scale,
    };
    let mut out = nelder_mead(objective, &param.params_of(&start), &opts);
    let mut evaluations = out.evaluations as u64;
    let mut converged = out.converged;
    opts.initial_step *= POLISH_STEP_FACTOR;
    for _ in 0..MAX_POLISH_ROUNDS {
        let next = nelder_mead(objective, &out.x, &opts);
        evaluations += next.evaluations as u64;
        let gain = out.f - next.f;
        converged = next.converged;
        if next.f < out.f {
            out = next;
        }
        if gain <= cfg.function_tolerance {
            break;
        }
    }

    let state = param.state(&out.x);
    RestartOutcome {
        value: evaluate_raw(functional, state.amplitudes(), bases),
        state,
        converged,
        evaluations,
    }
}

/// Minimizes the functional sum over `labels` with the standard
/// parametrization.
pub fn minimize_sum<const D: usize>(
    set: &MubSet<D>,
    functional: FunctionalKind,
    labels: &[BasisLabel],
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<D>> {
    minimize_with(set, functional, labels, cfg, &Parametrization::standard())
}

/// Minimizes the functional sum with an explicit parametrization.
pub fn minimize_with<const D: usize>(
    set: &MubSet<D>,
    functional: FunctionalKind,
    labels: &[BasisLabel],
    cfg: &OptimizerConfig,
    param: &Parametrization<D>,
) -> Result<OptimizationResult<D>> {
    cfg.validate()?;
    if labels.len() < 2 || labels.len() > set.bases().len() {
        return Err(Error::BasisCount { min: 2, max: set.bases().len(), got: labels.len() });
    }
    let bases = set.select(labels)?;

    let outcomes = cfg
        .execution
        .map_collect(cfg.restarts, |i| run_restart(functional, &bases, param, cfg, i));

    let mut best = 0;
    let mut best_so_far = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best].value {
            best = i;
        }
        best_so_far.push(outcomes[best].value);
    }
    let winner = &outcomes[best];
    Ok(OptimizationResult {
        minimum: winner.value,
        argmin: winner.state,
        functional,
        bases: labels.to_vec(),
        restarts_used: outcomes.len(),
        best_restart_index: best,
        converged: winner.converged,
        best_so_far,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckPass {
    pub description: String,
    pub slots: Vec<usize>,
    pub frame: Option<BasisLabel>,
    pub minimum: f64,
    pub difference: f64,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub reference_minimum: f64,
    pub tolerance: f64,
    pub passes: Vec<CrossCheckPass>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.passes.iter().all(|p| p.agrees)
    }
}

/// Slot assignment of the p-th permuted pass: a cyclic shift by p + 1.
fn shifted_slots<const D: usize>(p: usize) -> [usize; D] {
    std::array::from_fn(|k| (k + p + 1) % D)
}

/// Basis used to expand the re-parametrized states: the first non-computational
/// basis of the tuple, or B.
fn frame_basis(labels: &[BasisLabel]) -> BasisLabel {
    labels.iter().copied().find(|&l| l != BasisLabel::A).unwrap_or(BasisLabel::B)
}

/// Re-runs the minimization with permuted amplitude slots, and with the same
/// permutations expanded in another basis of the set, and compares minima.
pub fn reparametrized_cross_check<const D: usize>(
    set: &MubSet<D>,
    result: &OptimizationResult<D>,
    cfg: &OptimizerConfig,
) -> Result<CrossCheckReport> {
    reparametrized_cross_check_with_tolerance(
        set,
        result,
        cfg,
        tolerance::CROSS_CHECK_FACTOR * cfg.function_tolerance,
    )
}

pub fn reparametrized_cross_check_with_tolerance<const D: usize>(
    set: &MubSet<D>,
    result: &OptimizationResult<D>,
    cfg: &OptimizerConfig,
    tol: f64,
) -> Result<CrossCheckReport> {
    let frame_label = frame_basis(&result.bases);
    let frame = set.basis(frame_label)?.matrix;
    let mut passes = Vec::new();
    for p in 0..cfg.permutation_reparametrizations {
        let slots = shifted_slots::<D>(p);
        let permuted = Parametrization::permuted(slots)?;
        for (param, frame_used) in [(permuted, None), (permuted.in_frame(frame), Some(frame_label))] {
            let rerun = minimize_with(set, result.functional, &result.bases, cfg, &param)?;
            let difference = rerun.minimum - result.minimum;
            passes.push(CrossCheckPass {
                description: match frame_used {
                    None => format!("slots {slots:?}"),
                    Some(l) => format!("slots {slots:?} in basis {l}"),
                },
                slots: slots.to_vec(),
                frame: frame_used,
                minimum: rerun.minimum,
                difference,
                agrees: difference.abs() <= tol,
            });
        }
    }
    Ok(CrossCheckReport { reference_minimum: result.minimum, tolerance: tol, passes })
}
