use std::path::Path;

use mublab_core::detector::{
    default_state_family, predict_states, DetectorModel, EpsilonProfile, LabeledState, ModelCheck, PredictionConfig,
    StatePrediction,
};
use mublab_core::record::ComplexRecord;
use mublab_core::{MubSet, StateVector, TripletId, C64};
use serde::Deserialize;

use crate::catalog;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, Context, CsvTable};

use super::{out_path, report_written};

#[derive(Deserialize)]
struct StateInput {
    id: String,
    amplitudes: Vec<ComplexRecord>,
}

/// Reads `[{id, amplitudes: [{re, im}]}]` and renormalizes each state.
pub fn load_states<const D: usize>(path: &Path) -> Result<Vec<LabeledState<D>>, CliError> {
    let read_err = |reason: String| CliError::Read { path: path.to_path_buf(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| read_err(e.to_string()))?;
    let inputs: Vec<StateInput> = serde_json::from_str(&text).map_err(|e| read_err(e.to_string()))?;
    inputs
        .into_iter()
        .map(|s| {
            let amps: Vec<C64> = s.amplitudes.iter().map(|&a| a.into()).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(CliError::Usage(format!("state {:?} has no usable norm", s.id)));
            }
            let scaled: Vec<C64> = amps.iter().map(|a| a / norm).collect();
            let state = StateVector::<D>::from_slice(&scaled)
                .map_err(|e| CliError::Usage(format!("state {:?}: {e}", s.id)))?;
            Ok(LabeledState { id: s.id, state })
        })
        .collect()
}

pub struct DetectorRun {
    pub predictions: Vec<StatePrediction>,
    pub model_check: ModelCheck,
    pub cross_talk: Vec<f64>,
}

pub fn simulate<const D: usize>(
    set: &MubSet<D>,
    cfg: &RunConfig,
    profile: &EpsilonProfile,
    triplet: &TripletId,
    states: &[LabeledState<D>],
) -> Result<DetectorRun, CliError> {
    let model = DetectorModel::noisy(set, profile, cfg.seed)?;
    let pc = PredictionConfig {
        shots: cfg.detector.shots,
        resamples: cfg.detector.resamples,
        seed: cfg.seed,
        execution: cfg.execution,
    };
    Ok(DetectorRun {
        predictions: predict_states(set, &model, triplet, states, &pc)?,
        model_check: model.check(),
        cross_talk: model.povms().iter().map(|p| p.cross_talk()).collect(),
    })
}

pub fn predictions_table(predictions: &[StatePrediction]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "state_id",
        "triplet",
        "ideal_entropy_sum",
        "predicted_entropy_sum",
        "err_low",
        "err_high",
    ]);
    for p in predictions {
        t.push(vec![
            p.state_id.clone(),
            p.triplet.to_string(),
            num(p.ideal_entropy_sum),
            num(p.predicted_entropy_sum),
            num(p.err_low),
            num(p.err_high),
        ]);
    }
    t
}

pub fn parse_triplet<const D: usize>(s: &str) -> Result<TripletId, CliError> {
    let t = TripletId::parse(s)?;
    if !t.valid_for(D) {
        return Err(CliError::Usage(format!("triplet {t} does not exist in dimension {D}")));
    }
    Ok(t)
}

pub fn run<const D: usize>(
    ctx: &Context,
    triplet: &str,
    states: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let triplet = parse_triplet::<D>(triplet)?;
    let set = catalog::load::<D>(cfg)?;
    let profile: EpsilonProfile = cfg.detector.epsilon_profile.parse()?;
    let states = match states {
        Some(p) => load_states::<D>(p)?,
        None => default_state_family(&set, &triplet, cfg.detector.random_states, cfg.seed),
    };
    let run = simulate(&set, cfg, &profile, &triplet, &states)?;
    let path = out_path(ctx, out, "predictions.csv");
    ctx.write_csv(&path, &predictions_table(&run.predictions))?;
    report_written(&path);
    let eps: Vec<String> = run.cross_talk.iter().map(|e| format!("{e:.4}")).collect();
    println!("{} states on {triplet}; cross-talk per basis [{}]", run.predictions.len(), eps.join(", "));
    if !run.model_check.passed() {
        return Err(CliError::Verification(format!("detector model is not a valid POVM: {:?}", run.model_check)));
    }
    Ok(())
}
