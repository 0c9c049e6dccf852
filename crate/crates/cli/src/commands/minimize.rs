use std::path::Path;

use mublab_core::bounds::{known_bound, KnownBound};
use mublab_core::optimizer::{minimize_sum, reparametrized_cross_check, CrossCheckReport};
use mublab_core::record::StateRecord;
use mublab_core::{BasisLabel, FunctionalKind};
use serde::Serialize;

use crate::catalog;
use crate::error::CliError;
use crate::output::Context;

use super::{bound_slack, out_path, report_written};

/// Amplitudes below this modulus count as null components.
pub const NULL_AMPLITUDE: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct MinimizePayload {
    pub dim: usize,
    pub functional: FunctionalKind,
    pub bases: String,
    pub minimum: f64,
    pub argmin: StateRecord,
    /// Computational-basis amplitudes of the argmin below [`NULL_AMPLITUDE`].
    pub null_components: usize,
    pub known_bound: Option<f64>,
    pub bound_is_exact: Option<bool>,
    pub respects_bound: bool,
    pub restarts_used: usize,
    pub best_restart_index: usize,
    pub converged: bool,
    pub evaluations: u64,
    pub best_so_far: Vec<f64>,
    pub cross_check: Option<CrossCheckReport>,
    pub cross_check_passed: Option<bool>,
}

pub fn run<const D: usize>(
    ctx: &Context,
    functional: FunctionalKind,
    labels: &[BasisLabel],
    cross_check: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let set = catalog::load::<D>(&ctx.config)?;
    let cfg = ctx.config.optimizer_for(labels.len());
    let result = minimize_sum(&set, functional, labels, &cfg)?;
    let check: Option<CrossCheckReport> =
        if cross_check { Some(reparametrized_cross_check(&set, &result, &cfg)?) } else { None };
    let bound: Option<KnownBound> = known_bound(D, functional, labels);
    let respects_bound = bound.is_none_or(|b| result.minimum >= b.value - bound_slack(functional, &b));

    let argmin = StateRecord::from(&result.argmin);
    let payload = MinimizePayload {
        dim: D,
        functional,
        bases: BasisLabel::format_list(labels),
        minimum: result.minimum,
        null_components: argmin.moduli.iter().filter(|&&m| m < NULL_AMPLITUDE).count(),
        argmin,
        known_bound: bound.map(|b| b.value),
        bound_is_exact: bound.map(|b| b.exact),
        respects_bound,
        restarts_used: result.restarts_used,
        best_restart_index: result.best_restart_index,
        converged: result.converged,
        evaluations: result.evaluations,
        best_so_far: result.best_so_far,
        cross_check_passed: check.as_ref().map(CrossCheckReport::passed),
        cross_check: check,
    };

    let path = out_path(ctx, out, "result.json");
    ctx.write_json(&path, &payload)?;
    report_written(&path);
    println!(
        "{} minimum over {}: {} ({} null components)",
        functional, payload.bases, payload.minimum, payload.null_components
    );
    if !payload.converged {
        eprintln!("warning: best restart stopped at the iteration limit");
    }
    if !respects_bound {
        return Err(CliError::Verification(format!(
            "minimum {} lies below the known bound {}",
            payload.minimum,
            payload.known_bound.unwrap_or(f64::NAN)
        )));
    }
    if payload.cross_check_passed == Some(false) {
        return Err(CliError::Verification("re-parametrized minimizations disagree".into()));
    }
    Ok(())
}
