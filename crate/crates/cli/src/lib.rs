//! `mublab`: batch frontend of the MUB uncertainty laboratory.
//!
//! Every subcommand resolves a [`RunConfig`] (defaults, then the `--config`
//! TOML file, then `MUBLAB_OUTPUT_DIR` for the output directory, then flags),
//! runs one or more checks and writes enveloped JSON or CSV reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

// NaN must fail these checks, so comparisons are negated on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mublab_core::{Execution, FunctionalKind};
use serde::Serialize;

pub use config::RunConfig;
pub use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
pub use output::{ConfigEcho, ReportEnvelope};

#[derive(Debug, Parser)]
#[command(name = "mublab", version, about = "Uncertainty relations for mutually unbiased bases in d = 4 and 5")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for outputs given by relative names.
    #[arg(long, global = true, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads, 0 for all cores. Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long, global = true, value_parser = parse_execution)]
    pub execution: Option<Execution>,
    /// Catalog JSON (as written by dump-mubs) replacing the built-in bases.
    #[arg(long, global = true, value_name = "FILE")]
    pub catalog: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Emit the basis matrices with their validation.
    DumpMubs {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the minimum of an uncertainty sum over a set of bases.
    Minimize {
        #[arg(long, default_value = "entropy", value_parser = parse_functional)]
        functional: FunctionalKind,
        /// Basis letters, e.g. ABE.
        #[arg(long)]
        bases: String,
        #[arg(long)]
        restarts: Option<usize>,
        /// Skip the re-parametrized reruns.
        #[arg(long)]
        no_cross_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram an uncertainty sum over Haar-random states.
    Scan {
        #[arg(long, default_value = "entropy", value_parser = parse_functional)]
        functional: FunctionalKind,
        #[arg(long)]
        bases: String,
        /// Sample count; accepts forms such as 1e7.
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split all triplets into classes by their certified minima.
    Classify {
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every automorphism maps triplets into their own class.
    VerifyLemma {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the tabulated optimal states and their mutual relations.
    VerifyTable {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict entropy sums seen through cross-talk detectors.
    SimulateDetector {
        #[arg(long)]
        triplet: String,
        /// `measured`, one value, or one value per basis separated by commas.
        #[arg(long)]
        epsilon_profile: Option<String>,
        /// JSON list of {id, amplitudes: [{re, im}]}; default is the standard
        /// state family of the triplet.
        #[arg(long)]
        states: Option<PathBuf>,
        #[arg(long, value_parser = parse_count)]
        shots: Option<u64>,
        #[arg(long)]
        resamples: Option<usize>,
        /// Haar states added to the default family.
        #[arg(long)]
        random_states: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check and write a summary with per-check tables.
    FullReport,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DumpMubs { .. } => "dump-mubs",
            Command::Minimize { .. } => "minimize",
            Command::Scan { .. } => "scan",
            Command::Classify { .. } => "classify",
            Command::VerifyLemma { .. } => "verify-lemma",
            Command::VerifyTable { .. } => "verify-table",
            Command::SimulateDetector { .. } => "simulate-detector",
            Command::FullReport => "full-report",
        }
    }
}

fn parse_execution(s: &str) -> Result<Execution, String> {
    s.parse().map_err(|e: mublab_core::Error| e.to_string())
}

fn parse_functional(s: &str) -> Result<FunctionalKind, String> {
    s.parse().map_err(|e: mublab_core::Error| e.to_string())
}

/// Non-negative integer, also in float notation (`1e7`, `2.5e6`).
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("{s:?} is not a non-negative integer")),
    }
}

/// Applies the file, environment and flag layers.
pub fn resolve_config(global: &GlobalArgs, env_output_dir: Option<OsString>) -> Result<RunConfig, CliError> {
    let mut cfg = match &global.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = env_output_dir.filter(|d| !d.is_empty()) {
        cfg.output_dir = dir.into();
    }
    if let Some(dir) = &global.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    if let Some(w) = global.workers {
        cfg.workers = w;
    }
    if let Some(d) = global.dim {
        cfg.dim = d;
    }
    if let Some(e) = global.execution {
        cfg.execution = e;
    }
    if let Some(c) = &global.catalog {
        cfg.catalog = Some(c.clone());
    }
    Ok(cfg)
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = resolve_config(&cli.global, std::env::var_os(config::OUTPUT_DIR_ENV))
        .and_then(|cfg| commands::execute(cfg, &cli.command));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("mublab {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
