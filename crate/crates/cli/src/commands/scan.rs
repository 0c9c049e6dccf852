use std::path::Path;

use mublab_core::bounds::known_bound;
use mublab_core::montecarlo::{scan, HaarSamplerConfig, ScanReport};
use mublab_core::record::StateRecord;
use mublab_core::{BasisLabel, FunctionalKind, MubSet};
use serde::Serialize;

use crate::catalog;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, Context, CsvTable};

use super::{bound_slack, out_path, report_written};

/// Scalar results of one scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub functional: FunctionalKind,
    pub bases: String,
    pub samples: u64,
    pub min_seen: f64,
    pub max_seen: f64,
    pub mean: f64,
    pub std_error: f64,
    pub bound: Option<f64>,
    /// `min_seen` clears the bound up to its slack.
    pub respects_bound: bool,
}

pub fn run_scan<const D: usize>(
    set: &MubSet<D>,
    cfg: &RunConfig,
    functional: FunctionalKind,
    labels: &[BasisLabel],
    samples: u64,
) -> Result<(ScanReport<D>, ScanSummary), CliError> {
    let sampler = HaarSamplerConfig {
        seed: cfg.seed,
        samples,
        // The caller already runs inside a pool of the configured size.
        workers: 0,
        bins: cfg.montecarlo.bins,
        range: None,
        execution: cfg.execution,
    };
    let report = scan(set, functional, labels, &sampler)?;
    let h = &report.histogram;
    let bound = known_bound(D, functional, labels);
    let summary = ScanSummary {
        functional,
        bases: BasisLabel::format_list(labels),
        samples: h.samples(),
        min_seen: h.min_seen(),
        max_seen: h.max_seen(),
        mean: report.mean,
        std_error: report.std_error,
        bound: bound.map(|b| b.value),
        respects_bound: bound.is_none_or(|b| h.min_seen() >= b.value - bound_slack(functional, &b)),
    };
    Ok((report, summary))
}

/// Bins, then footer rows keyed in the first column.
pub fn scan_table<const D: usize>(report: &ScanReport<D>, summary: &ScanSummary) -> CsvTable {
    let h = &report.histogram;
    let mut t = CsvTable::new(&["bin_lo", "bin_hi", "count"]);
    for (i, c) in h.counts().iter().enumerate() {
        let (lo, hi) = h.bin_edges(i);
        t.push(vec![num(lo), num(hi), c.to_string()]);
    }
    let mut footer = |key: &str, value: String| t.push(vec![key.to_string(), value, String::new()]);
    footer("min_seen", num(summary.min_seen));
    footer("max_seen", num(summary.max_seen));
    footer("mean", num(summary.mean));
    footer("std_error", num(summary.std_error));
    footer("samples", summary.samples.to_string());
    footer("underflow", h.underflow().to_string());
    footer("overflow", h.overflow().to_string());
    footer("bound", summary.bound.map(num).unwrap_or_default());
    footer("min_index", h.min_index().map(|i| i.to_string()).unwrap_or_default());
    let state = h.min_state().map(|s| serde_json::to_string(&StateRecord::from(s)).expect("record serializes"));
    footer("min_state", state.unwrap_or_default());
    t
}

pub fn run<const D: usize>(
    ctx: &Context,
    functional: FunctionalKind,
    labels: &[BasisLabel],
    out: Option<&Path>,
) -> Result<(), CliError> {
    let set = catalog::load::<D>(&ctx.config)?;
    let (report, summary) = run_scan(&set, &ctx.config, functional, labels, ctx.config.montecarlo.samples)?;
    let path = out_path(ctx, out, "hist.csv");
    ctx.write_csv(&path, &scan_table(&report, &summary))?;
    report_written(&path);
    println!(
        "{} over {}: {} samples, min {} max {} mean {} ± {} ({:.2} s)",
        functional,
        summary.bases,
        summary.samples,
        summary.min_seen,
        summary.max_seen,
        summary.mean,
        summary.std_error,
        report.runtime.as_secs_f64()
    );
    if !summary.respects_bound {
        return Err(CliError::Verification(format!(
            "sample value {} lies below the bound {}",
            summary.min_seen,
            summary.bound.unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}
