//! `full-report`: every check in one run, a summary JSON and one CSV per
//! check in the output directory.

use mublab_core::bounds::ClassId;
use mublab_core::detector::{default_state_family, predict_entropy_sum, DetectorModel, EpsilonProfile};
use mublab_core::functionals::entropy_sum;
use mublab_core::optimizer::minimize_sum;
use mublab_core::optimizer::table::four_basis_reference_state;
use mublab_core::symmetry::ClassificationReport;
use mublab_core::{tolerance, BasisLabel, FunctionalKind, MubSet, TripletId};
use serde::Serialize;

use crate::catalog;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, Context, CsvTable};

use super::detector::{predictions_table, simulate};
use super::scan::{run_scan, scan_table};
use super::symmetry::{classify, lemma, table};

/// Haar average of the triplet entropy sum, and the allowed distance from it.
const TRIPLET_MEAN_REFERENCE: f64 = 5.55;
const TRIPLET_MEAN_WINDOW: f64 = 0.02;
/// Pair minima may undershoot log₂ d by this much.
const PAIR_MINIMUM_SLACK: f64 = 1e-6;
/// Noiseless detector predictions must equal the ideal sums this closely.
const NOISELESS_TOLERANCE: f64 = 1e-12;
/// Triplets scanned at full sample count, one per class.
const SCAN_TRIPLETS: [&str; 2] = ["ABC", "DEF"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Hard checks decide the exit code; soft ones are findings.
    pub hard: bool,
    pub detail: String,
    pub tables: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Headline {
    pub classes: String,
    pub entropy_bounds: String,
    pub variance_bounds: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryPayload {
    pub passed: bool,
    pub headline: Option<Headline>,
    pub checks: Vec<CheckOutcome>,
}

struct Report<'a> {
    ctx: &'a Context,
    checks: Vec<CheckOutcome>,
}

impl Report<'_> {
    fn table(&self, name: &str, t: &CsvTable) -> Result<String, CliError> {
        self.ctx.write_csv(&self.ctx.config.output_path(name.as_ref()), t)?;
        Ok(name.to_string())
    }

    fn check(&mut self, name: &str, passed: bool, hard: bool, detail: String, tables: &[&str]) {
        let tag = match (passed, hard) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        println!("[{tag}] {name}: {detail}");
        self.checks.push(CheckOutcome {
            name: name.into(),
            passed,
            hard,
            detail,
            tables: tables.iter().map(|s| s.to_string()).collect(),
        });
    }

    fn finish(self, headline: Option<Headline>) -> Result<(), CliError> {
        let failed: Vec<String> = self.checks.iter().filter(|c| c.hard && !c.passed).map(|c| c.name.clone()).collect();
        let payload = SummaryPayload { passed: failed.is_empty(), headline, checks: self.checks };
        let path = self.ctx.config.output_path("summary.json".as_ref());
        self.ctx.write_json(&path, &payload)?;
        println!("wrote {}", path.display());
        if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::Verification(format!("failed checks: {}", failed.join(", "))))
        }
    }
}

/// The configuration with the dimension set and the catalog kept only when
/// it belongs to that dimension.
fn for_dim(cfg: &RunConfig, dim: usize) -> RunConfig {
    let mut c = cfg.clone();
    if c.dim != dim {
        c.catalog = None;
    }
    c.dim = dim;
    c
}

fn subsets(labels: &[BasisLabel], k: usize) -> Vec<Vec<BasisLabel>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        for mut rest in subsets(&labels[i + 1..], k - 1) {
            rest.insert(0, l);
            out.push(rest);
        }
    }
    out
}

fn opt_class(c: Option<ClassId>) -> String {
    c.map(|c| format!("{c:?}")).unwrap_or_default()
}

fn classification_table(report: &ClassificationReport) -> CsvTable {
    let mut t = CsvTable::new(&[
        "triplet",
        "class",
        "reference_class",
        "delta_n_class",
        "entropy_minimum",
        "variance_minimum",
        "converged",
        "null_components",
    ]);
    for e in &report.entries {
        let nulls = e.entropy_argmin.moduli.iter().filter(|&&m| m < super::minimize::NULL_AMPLITUDE).count();
        t.push(vec![
            e.triplet.to_string(),
            opt_class(e.class),
            opt_class(e.reference_class),
            opt_class(e.delta_n_class),
            num(e.entropy_minimum),
            num(e.variance_minimum),
            e.converged.to_string(),
            nulls.to_string(),
        ]);
    }
    t
}

/// A rejected catalog is a finding; an unreadable one stays an error.
fn as_finding<T>(r: Result<T, CliError>) -> Result<Result<T, CliError>, CliError> {
    match r {
        Err(e) if !matches!(e, CliError::Catalog(_)) => Err(e),
        other => Ok(other),
    }
}

fn catalogs(r: &mut Report, cfg: &RunConfig) -> Result<Option<(MubSet<5>, MubSet<4>)>, CliError> {
    let mut t = CsvTable::new(&["dim", "source", "status", "max_unbiasedness_deviation", "generating_relations"]);
    let source = |c: &RunConfig| c.catalog.as_ref().map(|p| p.display().to_string()).unwrap_or("built-in".into());
    let (c5, c4) = (for_dim(cfg, 5), for_dim(cfg, 4));
    let s5 = as_finding(catalog::load::<5>(&c5))?;
    let s4 = as_finding(catalog::load::<4>(&c4))?;
    let mut problems = Vec::new();
    let mut relations_ok = true;
    match &s5 {
        Ok(set) => {
            let p = catalog::payload(set)?;
            let g = p.generating_relations.as_ref().expect("d = 5 has relations");
            // Only the built-in catalog must obey them.
            relations_ok = c5.catalog.is_some() || g.passed();
            t.push(vec![
                "5".into(),
                source(&c5),
                "valid".into(),
                num(p.unbiasedness.max_deviation),
                if g.passed() { "hold".into() } else { "fail".into() },
            ]);
        }
        Err(e) => {
            problems.push(format!("d = 5: {e}"));
            t.push(vec!["5".into(), source(&c5), e.to_string(), String::new(), String::new()]);
        }
    }
    match &s4 {
        Ok(set) => t.push(vec![
            "4".into(),
            source(&c4),
            "valid".into(),
            num(set.verify_mutual_unbiasedness().max_deviation),
            String::new(),
        ]),
        Err(e) => {
            problems.push(format!("d = 4: {e}"));
            t.push(vec!["4".into(), source(&c4), e.to_string(), String::new(), String::new()]);
        }
    }
    let name = r.table("mub_validation.csv", &t)?;
    let detail = if problems.is_empty() {
        "both catalogs unitary and mutually unbiased".to_string()
    } else {
        problems.join("; ")
    };
    r.check("mub-validation", problems.is_empty() && relations_ok, true, detail, &[&name]);
    match (s5, s4) {
        (Ok(a), Ok(b)) => Ok(Some((a, b))),
        _ => Ok(None),
    }
}

fn classification(r: &mut Report, cfg: &RunConfig) -> Result<Option<Headline>, CliError> {
    let c5 = classify::<5>(&for_dim(cfg, 5))?;
    let name = r.table("classification_d5.csv", &classification_table(&c5))?;
    let s1 = c5.members(ClassId::S1).len();
    let s2 = c5.members(ClassId::S2).len();
    r.check(
        "classification-d5",
        c5.entropy_consistent() && c5.entries.iter().all(|e| e.converged),
        true,
        format!("{s1}/{s2} split, reference lists and the Δn rule agree: {}", c5.entropy_consistent()),
        &[&name],
    );
    let cls = |c: ClassId| c5.classes.iter().find(|s| s.class == c).expect("d = 5 classes");
    let (a, b) = (cls(ClassId::S1), cls(ClassId::S2));
    r.check(
        "variance-bounds-d5",
        c5.variance_consistent(),
        true,
        format!(
            "certified {:.6} / {:.6}, reference {} / {} within {}",
            a.certified_variance,
            b.certified_variance,
            a.bound_variance,
            b.bound_variance,
            tolerance::VARIANCE_CLASS_BOUND
        ),
        &[&name],
    );

    let c4 = classify::<4>(&for_dim(cfg, 4))?;
    let name4 = r.table("classification_d4.csv", &classification_table(&c4))?;
    let u = &c4.classes[0];
    r.check(
        "d4-uniformity",
        c4.passed(),
        true,
        format!(
            "{} triplets, entropy {:.6}..{:.6}, variance {:.6}..{:.6}",
            c4.entries.len(),
            u.certified_entropy,
            c4.entries.iter().map(|e| e.entropy_minimum).fold(f64::NEG_INFINITY, f64::max),
            u.certified_variance,
            c4.entries.iter().map(|e| e.variance_minimum).fold(f64::NEG_INFINITY, f64::max),
        ),
        &[&name4],
    );

    let classes = c5.classes.iter().filter(|c| !c.members.is_empty()).count();
    Ok(Some(Headline {
        classes: format!("{classes} classes ({s1} + {s2} triplets)"),
        entropy_bounds: format!("{:.5} / {:.5}", a.certified_entropy, b.certified_entropy),
        variance_bounds: format!(
            "{:.3} / {:.3} (d=5), {:.3} (d=4); reference {} / {}, {} within {}",
            a.certified_variance,
            b.certified_variance,
            u.certified_variance,
            a.bound_variance,
            b.bound_variance,
            u.bound_variance,
            tolerance::VARIANCE_CLASS_BOUND
        ),
    }))
}

fn pairs(r: &mut Report, cfg: &RunConfig, set: &MubSet<5>) -> Result<(), CliError> {
    let log_d = 5f64.log2();
    let opt = cfg.optimizer_for(2);
    let mut t = CsvTable::new(&["pair", "minimum", "mc_samples", "mc_min_seen", "mc_mean", "mc_std_error"]);
    let mut bound_ok = true;
    let mut stats = Vec::new();
    for pair in subsets(&set.labels(), 2) {
        let m = minimize_sum(set, FunctionalKind::ShannonEntropySum, &pair, &opt)?;
        let (_, s) = run_scan(set, cfg, FunctionalKind::ShannonEntropySum, &pair, cfg.montecarlo.pair_samples)?;
        bound_ok &= m.minimum >= log_d - PAIR_MINIMUM_SLACK && s.respects_bound;
        stats.push((s.mean, s.std_error));
        t.push(vec![s.bases.clone(), num(m.minimum), s.samples.to_string(), num(s.min_seen), num(s.mean), num(s.std_error)]);
    }
    let name = r.table("pairs.csv", &t)?;
    r.check(
        "maassen-uffink",
        bound_ok,
        true,
        format!("{} pairs, minima and samples at or above log2(5)", stats.len()),
        &[&name],
    );
    let mut z_max: f64 = 0.0;
    for (i, a) in stats.iter().enumerate() {
        for b in &stats[i + 1..] {
            z_max = z_max.max((a.0 - b.0).abs() / (a.1 * a.1 + b.1 * b.1).sqrt());
        }
    }
    r.check("pair-histograms", z_max <= 3.0, false, format!("largest mean difference {z_max:.2} standard errors"), &[&name]);
    Ok(())
}

fn four_basis(r: &mut Report, cfg: &RunConfig, set: &MubSet<5>) -> Result<(), CliError> {
    let opt = cfg.optimizer_for(4);
    let reference = four_basis_reference_state();
    let mut t = CsvTable::new(&["bases", "minimum", "reference_state_sum"]);
    let (mut lo, mut hi, mut oracle) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    for sub in subsets(&set.labels(), 4) {
        let m = minimize_sum(set, FunctionalKind::ShannonEntropySum, &sub, &opt)?;
        let v = entropy_sum(&reference, &set.select(&sub)?)?;
        lo = lo.min(m.minimum);
        hi = hi.max(m.minimum);
        oracle = oracle.min(v);
        t.push(vec![BasisLabel::format_list(&sub), num(m.minimum), num(v)]);
    }
    let name = r.table("four_basis.csv", &t)?;
    let tol = tolerance::CLASS_BOUND;
    r.check(
        "four-basis-uniformity",
        hi - lo <= tol && (lo - oracle).abs() <= tol,
        true,
        format!("minima {lo:.6}..{hi:.6}, reference state {oracle:.6}"),
        &[&name],
    );
    Ok(())
}

fn scans(r: &mut Report, cfg: &RunConfig, set: &MubSet<5>) -> Result<(), CliError> {
    let mut t = CsvTable::new(&[
        "functional",
        "bases",
        "samples",
        "min_seen",
        "max_seen",
        "mean",
        "std_error",
        "bound",
        "respects_bound",
    ]);
    let mut names = Vec::new();
    let mut all_ok = true;
    let mut entropy_means = Vec::new();
    for functional in [FunctionalKind::ShannonEntropySum, FunctionalKind::MinVarianceSum] {
        for tri in SCAN_TRIPLETS {
            let labels = BasisLabel::parse_list(tri)?;
            let samples = match functional {
                FunctionalKind::ShannonEntropySum => cfg.montecarlo.samples,
                FunctionalKind::MinVarianceSum => cfg.montecarlo.variance_samples,
            };
            let (rep, s) = run_scan(set, cfg, functional, &labels, samples)?;
            names.push(r.table(&format!("hist_{}_{tri}.csv", functional.name()), &scan_table(&rep, &s))?);
            all_ok &= s.respects_bound;
            if functional == FunctionalKind::ShannonEntropySum {
                entropy_means.push((s.mean, s.std_error));
            }
            t.push(vec![
                functional.name().into(),
                s.bases.clone(),
                s.samples.to_string(),
                num(s.min_seen),
                num(s.max_seen),
                num(s.mean),
                num(s.std_error),
                s.bound.map(num).unwrap_or_default(),
                s.respects_bound.to_string(),
            ]);
        }
    }
    names.insert(0, r.table("scans.csv", &t)?);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    r.check("monte-carlo-bounds", all_ok, true, "no sample below its class bound".into(), &refs);
    let ((m1, e1), (m2, e2)) = (entropy_means[0], entropy_means[1]);
    let z = (m1 - m2).abs() / (e1 * e1 + e2 * e2).sqrt();
    let near = [m1, m2].iter().all(|m| (m - TRIPLET_MEAN_REFERENCE).abs() <= TRIPLET_MEAN_WINDOW);
    r.check(
        "monte-carlo-means",
        z <= 3.0 && near,
        true,
        format!("entropy means {m1:.5} / {m2:.5}, {z:.2} standard errors apart"),
        &refs[..1],
    );
    Ok(())
}

fn tables(r: &mut Report, cfg: &RunConfig) -> Result<(), CliError> {
    let p = table(&for_dim(cfg, 5))?;
    let mut t = CsvTable::new(&[
        "triplet",
        "raw_norm_sq",
        "entropy_sum",
        "within_bound",
        "min_over_s1",
        "worst_s1_triplet",
        "respects_s1_bound",
    ]);
    for row in &p.table.rows {
        t.push(vec![
            row.triplet.to_string(),
            num(row.raw_norm_sq),
            num(row.entropy_sum),
            row.within_bound.to_string(),
            num(row.min_over_s1),
            row.worst_s1_triplet.to_string(),
            row.respects_s1_bound.to_string(),
        ]);
    }
    let name = r.table("table_states.csv", &t)?;
    let worst = p.table.rows.iter().map(|x| x.entropy_sum).fold(f64::NEG_INFINITY, f64::max);
    r.check(
        "table-states",
        p.table.passed(),
        true,
        format!("{} rows, largest sum {worst:.6} against {} + {}", p.table.rows.len(), p.table.target, p.table.slack),
        &[&name],
    );

    let mut t = CsvTable::new(&["from", "to", "element", "permutation", "global_phase", "residual", "matched"]);
    for rel in p.relations.pairs.iter().chain(&p.relations.self_checks).chain(&p.relations.controls) {
        let perm: Vec<String> = rel.permutation.iter().map(|k| k.to_string()).collect();
        t.push(vec![
            rel.from.clone(),
            rel.to.clone(),
            rel.element.to_string(),
            perm.join(" "),
            num(rel.global_phase),
            num(rel.residual),
            rel.matched.to_string(),
        ]);
    }
    let name = r.table("table_relations.csv", &t)?;
    r.check(
        "table-relation-controls",
        p.relations.controls_passed(),
        true,
        "self-matches found, random controls rejected".into(),
        &[&name],
    );
    let rel = &p.relations;
    r.check(
        "table-relations",
        rel.matched_pairs == rel.pairs.len(),
        false,
        format!(
            "{} of {} row pairs related by one element, {} connected group(s)",
            rel.matched_pairs,
            rel.pairs.len(),
            rel.connected_groups.len()
        ),
        &[&name],
    );
    Ok(())
}

fn symmetry(r: &mut Report, cfg: &RunConfig) -> Result<(), CliError> {
    let p = lemma(&for_dim(cfg, 5))?;
    let mut t = CsvTable::new(&["element", "checks", "violations", "unmatched"]);
    for e in &p.lemma.elements {
        t.push(vec![e.label.clone(), e.tally.checks.to_string(), e.tally.violations.to_string(), e.tally.unmatched.to_string()]);
    }
    let name = r.table("lemma.csv", &t)?;
    let total = &p.lemma.total;
    r.check(
        "lemma",
        p.lemma.passed(),
        true,
        format!(
            "{} trials x {} elements, {} checks, {} violations",
            p.lemma.trials,
            p.lemma.elements.len(),
            total.checks,
            total.violations
        ),
        &[&name],
    );

    let f = &p.fourier_identities;
    let mut t = CsvTable::new(&[
        "name",
        "strict_residual",
        "monomial_residual",
        "holds_strictly",
        "holds_up_to_phases",
    ]);
    for c in [&f.first, &f.second, &f.control] {
        t.push(vec![
            c.name.clone(),
            num(c.strict_residual),
            num(c.monomial_residual),
            c.holds_strictly().to_string(),
            c.holds_up_to_phases().to_string(),
        ]);
    }
    let name = r.table("identities.csv", &t)?;
    r.check(
        "fourier-identities",
        f.passed(),
        true,
        format!(
            "residuals {:.1e} / {:.1e}, control {:.2}",
            f.first.monomial_residual, f.second.monomial_residual, f.control.monomial_residual
        ),
        &[&name],
    );
    Ok(())
}

fn detector(r: &mut Report, cfg: &RunConfig, set: &MubSet<5>) -> Result<(), CliError> {
    let profile: EpsilonProfile = cfg.detector.epsilon_profile.parse()?;
    let noiseless = DetectorModel::noisy(set, &EpsilonProfile::Uniform(0.0), cfg.seed)?;
    let (two, three) = (2.0 * 5f64.log2(), 3.0 * 5f64.log2());
    let mut names = Vec::new();
    let (mut model_ok, mut ordering_ok) = (true, true);
    let mut noiseless_dev: f64 = 0.0;
    for tri in &cfg.detector.triplets {
        let triplet = TripletId::parse(tri)?;
        let states = default_state_family(set, &triplet, cfg.detector.random_states, cfg.seed);
        let run = simulate(set, cfg, &profile, &triplet, &states)?;
        model_ok &= run.model_check.passed();
        for p in &run.predictions {
            if p.state_id.starts_with("int-") {
                ordering_ok &= p.predicted_entropy_sum > two;
            } else if p.state_id.starts_with("ext-") {
                ordering_ok &= p.predicted_entropy_sum < three;
            }
        }
        let bases = set.select(&triplet.labels())?;
        for s in &states {
            let ideal = entropy_sum(&s.state, &bases)?;
            noiseless_dev = noiseless_dev.max((predict_entropy_sum(&s.state, &triplet, &noiseless)? - ideal).abs());
        }
        names.push(r.table(&format!("detector_{triplet}.csv"), &predictions_table(&run.predictions))?);
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    r.check("detector-model", model_ok, true, "cross-talk POVMs complete, Hermitian and positive".into(), &refs);
    r.check(
        "detector-noiseless",
        noiseless_dev <= NOISELESS_TOLERANCE,
        true,
        format!("largest deviation from ideal {noiseless_dev:.1e}"),
        &refs,
    );
    r.check(
        "detector-ordering",
        ordering_ok,
        true,
        "internal eigenstates above 2 log2(5), external ones below 3 log2(5)".into(),
        &refs,
    );
    Ok(())
}

pub fn run(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let mut r = Report { ctx, checks: Vec::new() };
    let Some((set5, _set4)) = catalogs(&mut r, cfg)? else {
        return r.finish(None);
    };
    let headline = classification(&mut r, cfg)?;
    pairs(&mut r, cfg, &set5)?;
    four_basis(&mut r, cfg, &set5)?;
    scans(&mut r, cfg, &set5)?;
    tables(&mut r, cfg)?;
    symmetry(&mut r, cfg)?;
    detector(&mut r, cfg, &set5)?;
    if let Some(h) = &headline {
        println!("{}; entropy bounds {}; variance bounds {}", h.classes, h.entropy_bounds, h.variance_bounds);
    }
    r.finish(headline)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_count() {
        let l = BasisLabel::parse_list("ABCDEF").unwrap();
        assert_eq!(subsets(&l, 2).len(), 15);
        assert_eq!(subsets(&l, 4).len(), 15);
        assert_eq!(subsets(&l, 3).len(), 20);
        assert_eq!(BasisLabel::format_list(&subsets(&l, 4)[0]), "ABCD");
    }
}
