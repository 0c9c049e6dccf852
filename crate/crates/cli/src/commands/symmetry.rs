use std::path::Path;

use mublab_core::optimizer::table::{verify_table_states, TableReport};
use mublab_core::symmetry::{
    classify_by_optimization, enumerate_triplets, verify_fourier_identities, verify_lemma, verify_table_state_relations,
    ClassificationReport, FourierIdentityReport, LemmaReport, TableRelationReport,
};
use serde::Serialize;

use crate::catalog;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Context;

use super::{out_path, report_written};

pub fn classify<const D: usize>(cfg: &RunConfig) -> Result<ClassificationReport, CliError> {
    let set = catalog::load::<D>(cfg)?;
    let triplets = enumerate_triplets(D)?;
    Ok(classify_by_optimization(&set, &triplets, &cfg.optimizer_for(3))?)
}

pub fn print_classes(report: &ClassificationReport) {
    for c in &report.classes {
        let members: Vec<String> = c.members.iter().map(|t| t.to_string()).collect();
        println!(
            "d = {} {:?}: {} triplets, entropy {} variance {} [{}]",
            report.dim,
            c.class,
            c.members.len(),
            c.certified_entropy,
            c.certified_variance,
            members.join(" ")
        );
    }
}

pub fn run_classify<const D: usize>(ctx: &Context, out: Option<&Path>) -> Result<(), CliError> {
    let report = classify::<D>(&ctx.config)?;
    let path = out_path(ctx, out, "classes.json");
    ctx.write_json(&path, &report)?;
    report_written(&path);
    print_classes(&report);
    if !report.entropy_consistent() {
        let bad: Vec<String> = report
            .entries
            .iter()
            .filter(|e| e.class.is_none() || e.class != e.reference_class || (D == 5 && e.delta_n_class != e.class))
            .map(|e| e.triplet.to_string())
            .collect();
        return Err(CliError::Verification(format!("classification mismatch for {}", bad.join(", "))));
    }
    if !report.passed() {
        return Err(CliError::Verification("variance minima or convergence do not match the classes".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaPayload {
    pub passed: bool,
    pub fourier_identities: FourierIdentityReport,
    pub lemma: LemmaReport,
}

pub fn lemma(cfg: &RunConfig) -> Result<LemmaPayload, CliError> {
    let set = catalog::load::<5>(cfg)?;
    let fourier_identities = verify_fourier_identities();
    let lemma = verify_lemma(&set, cfg.lemma.trials, cfg.seed, cfg.execution)?;
    Ok(LemmaPayload { passed: fourier_identities.passed() && lemma.passed(), fourier_identities, lemma })
}

pub fn run_lemma(ctx: &Context, out: Option<&Path>) -> Result<(), CliError> {
    let p = lemma(&ctx.config)?;
    let path = out_path(ctx, out, "lemma_report.json");
    ctx.write_json(&path, &p)?;
    report_written(&path);
    let t = &p.lemma.total;
    println!(
        "{} trials x {} elements: {} checks, {} violations, {} unmatched",
        p.lemma.trials,
        p.lemma.elements.len(),
        t.checks,
        t.violations,
        t.unmatched
    );
    let f = &p.fourier_identities;
    for c in [&f.first, &f.second, &f.control] {
        println!("{}: strict residual {:e}, up to phases {:e}", c.name, c.strict_residual, c.monomial_residual);
    }
    if !f.passed() {
        return Err(CliError::Verification("Fourier identities do not hold".into()));
    }
    if !p.lemma.passed() {
        return Err(CliError::Verification(format!("{} class-preservation violations", t.violations)));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct TablePayload {
    pub passed: bool,
    pub table: TableReport,
    pub relations: TableRelationReport,
}

pub fn table(cfg: &RunConfig) -> Result<TablePayload, CliError> {
    let set = catalog::load::<5>(cfg)?;
    let table = verify_table_states(&set)?;
    let relations = verify_table_state_relations(cfg.seed);
    Ok(TablePayload { passed: table.passed() && relations.controls_passed(), table, relations })
}

pub fn run_table(ctx: &Context, out: Option<&Path>) -> Result<(), CliError> {
    let p = table(&ctx.config)?;
    let path = out_path(ctx, out, "table_report.json");
    ctx.write_json(&path, &p)?;
    report_written(&path);
    let worst = p.table.rows.iter().map(|r| r.entropy_sum).fold(f64::NEG_INFINITY, f64::max);
    println!(
        "{} rows, largest entropy sum {} (target {} + {}); {} of {} row pairs related, {} group(s)",
        p.table.rows.len(),
        worst,
        p.table.target,
        p.table.slack,
        p.relations.matched_pairs,
        p.relations.pairs.len(),
        p.relations.connected_groups.len()
    );
    if !p.table.passed() {
        let bad: Vec<String> = p
            .table
            .rows
            .iter()
            .filter(|r| !(r.within_bound && r.respects_s1_bound))
            .map(|r| r.triplet.to_string())
            .collect();
        return Err(CliError::Verification(format!("tabulated states fail for {}", bad.join(", "))));
    }
    if !p.relations.controls_passed() {
        return Err(CliError::Verification("relation search failed its controls".into()));
    }
    Ok(())
}
