//! Subcommand implementations.

mod detector;
mod dump;
mod minimize;
pub mod report;
mod scan;
mod symmetry;

use std::path::{Path, PathBuf};

use mublab_core::bounds::KnownBound;
use mublab_core::{tolerance, BasisLabel, FunctionalKind};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Context;
use crate::Command;

pub use detector::load_states;
pub use minimize::MinimizePayload;
pub use scan::{scan_table, ScanSummary};
pub use symmetry::{LemmaPayload, TablePayload};

/// Calls `$f::<D>(args)` for the configured dimension.
macro_rules! by_dim {
    ($dim:expr, $($f:ident)::+($($arg:expr),*)) => {
        match $dim {
            4 => $($f)::+::<4>($($arg),*),
            5 => $($f)::+::<5>($($arg),*),
            d => Err(CliError::Usage(format!("dimension {d} is not supported (use 4 or 5)"))),
        }
    };
}

fn apply_overrides(cfg: &mut RunConfig, command: &Command) {
    match command {
        Command::Minimize { restarts, .. } | Command::Classify { restarts, .. } => {
            if restarts.is_some() {
                cfg.optimizer.restarts = *restarts;
            }
        }
        Command::Scan { samples, bins, .. } => {
            if let Some(s) = samples {
                cfg.montecarlo.samples = *s;
            }
            if let Some(b) = bins {
                cfg.montecarlo.bins = *b;
            }
        }
        Command::VerifyLemma { trials: Some(t), .. } => cfg.lemma.trials = *t,
        Command::SimulateDetector { epsilon_profile, shots, resamples, random_states, .. } => {
            let d = &mut cfg.detector;
            if let Some(p) = epsilon_profile {
                d.epsilon_profile = p.clone();
            }
            if let Some(s) = shots {
                d.shots = *s;
            }
            if let Some(r) = resamples {
                d.resamples = *r;
            }
            if let Some(r) = random_states {
                d.random_states = *r;
            }
        }
        _ => {}
    }
}

/// Subcommand arguments for the config echo, without the variant tag.
fn arguments_of(command: &Command) -> serde_json::Value {
    match serde_json::to_value(command).expect("arguments serialize") {
        serde_json::Value::Object(mut m) if m.len() == 1 => {
            let key = m.keys().next().cloned().expect("one key");
            m.remove(&key).expect("present")
        }
        _ => serde_json::Value::Null,
    }
}

pub fn execute(mut cfg: RunConfig, command: &Command) -> Result<(), CliError> {
    apply_overrides(&mut cfg, command);
    cfg.validate()?;
    let ctx = Context::new(cfg, command.name(), arguments_of(command));
    let (execution, workers) = (ctx.config.execution, ctx.config.workers);
    execution.with_workers(workers, || dispatch(&ctx, command))
}

fn dispatch(ctx: &Context, command: &Command) -> Result<(), CliError> {
    let dim = ctx.config.dim;
    match command {
        Command::DumpMubs { format, out } => by_dim!(dim, dump::run(ctx, *format, out.as_deref())),
        Command::Minimize { functional, bases, no_cross_check, out, .. } => {
            let labels = parse_bases(bases)?;
            by_dim!(dim, minimize::run(ctx, *functional, &labels, !no_cross_check, out.as_deref()))
        }
        Command::Scan { functional, bases, out, .. } => {
            let labels = parse_bases(bases)?;
            by_dim!(dim, scan::run(ctx, *functional, &labels, out.as_deref()))
        }
        Command::Classify { out, .. } => by_dim!(dim, symmetry::run_classify(ctx, out.as_deref())),
        Command::VerifyLemma { out, .. } => {
            require_dim5(dim, command)?;
            symmetry::run_lemma(ctx, out.as_deref())
        }
        Command::VerifyTable { out } => {
            require_dim5(dim, command)?;
            symmetry::run_table(ctx, out.as_deref())
        }
        Command::SimulateDetector { triplet, states, out, .. } => {
            by_dim!(dim, detector::run(ctx, triplet, states.as_deref(), out.as_deref()))
        }
        Command::FullReport => report::run(ctx),
    }
}

fn require_dim5(dim: usize, command: &Command) -> Result<(), CliError> {
    if dim == 5 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{} is defined for d = 5 only", command.name())))
    }
}

pub(crate) fn parse_bases(s: &str) -> Result<Vec<BasisLabel>, CliError> {
    let labels = BasisLabel::parse_list(s)?;
    if labels.is_empty() {
        return Err(CliError::Usage("no bases given".into()));
    }
    Ok(labels)
}

pub(crate) fn out_path(ctx: &Context, out: Option<&Path>, default: &str) -> PathBuf {
    ctx.config.output_path(out.unwrap_or(Path::new(default)))
}

/// Allowed shortfall below a known bound: rounding for exact bounds, the
/// printed precision for numerical ones.
pub(crate) fn bound_slack(functional: FunctionalKind, bound: &KnownBound) -> f64 {
    if bound.exact {
        tolerance::EXACT_BOUND_SLACK
    } else if functional == FunctionalKind::MinVarianceSum {
        tolerance::VARIANCE_CLASS_BOUND
    } else {
        tolerance::NUMERIC_BOUND_SLACK
    }
}

pub(crate) fn report_written(path: &Path) {
    println!("wrote {}", path.display());
}
