mod common;

use std::fs;
use std::process::Command;

use common::*;
use serde_json::{json, Value};

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mublab(dir.path(), &["minimize", "--no-such-flag"]).code, 2);
    assert_eq!(mublab(dir.path(), &["frobnicate"]).code, 2);
    assert_eq!(mublab(dir.path(), &["minimize", "--bases", "ABZ"]).code, 2);
    assert_eq!(mublab(dir.path(), &["minimize", "--bases", "AAB"]).code, 2);
    assert_eq!(mublab(dir.path(), &["classify", "--dim", "7"]).code, 2);
    assert_eq!(mublab(dir.path(), &["--help"]).code, 0);
}

#[test]
fn every_report_has_an_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let r = mublab(dir.path(), &["minimize", "--bases", "AB", "--seed", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let env = envelope(&dir.path().join("result.json"));
    assert!(env["tool_version"].as_str().unwrap().starts_with("mublab "));
    assert!(env["timestamp"].as_str().unwrap().ends_with('Z'));
    assert_eq!(env["config_echo"]["command"], "minimize");
    assert_eq!(env["config_echo"]["arguments"]["bases"], "AB");
    assert_eq!(env["config_echo"]["config"]["seed"], 3);
    assert!(env["payload"]["minimum"].is_number());

    let r = mublab(dir.path(), &["dump-mubs", "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = fs::read_to_string(dir.path().join("mubs.csv")).unwrap();
    let head: Value = serde_json::from_str(text.lines().next().unwrap().trim_start_matches("# ")).unwrap();
    assert_eq!(head["config_echo"]["command"], "dump-mubs");
    assert_eq!(head["payload"]["columns"], json!(["basis", "row", "col", "re", "im"]));
    // Six bases of 25 entries each.
    assert_eq!(csv_rows(&dir.path().join("mubs.csv")).len(), 150);
}

#[test]
fn no_temporary_files_are_left_behind() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mublab(dir.path(), &["dump-mubs"]).code, 0);
    let names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["mubs.json"]);
}

#[test]
fn dumped_catalog_matches_the_quadratic_phase_formula_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mublab(dir.path(), &["dump-mubs"]).code, 0);
    let path = dir.path().join("mubs.json");
    let p = payload(&path);
    assert!(num(&p["unbiasedness"]["max_deviation"]) < 1e-12);
    for b in p["bases"].as_array().unwrap() {
        let letter = b["label"].as_str().unwrap().chars().next().unwrap();
        let rows = b["matrix"]["rows"].as_array().unwrap();
        for (i, row) in rows.iter().enumerate() {
            for (j, z) in row.as_array().unwrap().iter().enumerate() {
                let want = d5_column(letter, j)[i];
                assert!((num(&z["re"]) - want.re).abs() < 1e-12 && (num(&z["im"]) - want.im).abs() < 1e-12);
            }
        }
    }

    let r = mublab(dir.path(), &["--catalog", path.to_str().unwrap(), "minimize", "--bases", "ABC", "--out", "again.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!((num(&payload(&dir.path().join("again.json"))["minimum"]) - 2.0 * log2_5()).abs() < 1e-6);
}

#[test]
fn tampered_catalog_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mublab(dir.path(), &["dump-mubs"]).code, 0);
    let path = dir.path().join("mubs.json");
    let mut env = envelope(&path);
    let z = &mut env["payload"]["bases"][3]["matrix"]["rows"][1][2];
    z["re"] = json!(-num(&z["re"]));
    z["im"] = json!(-num(&z["im"]));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&env).unwrap()).unwrap();

    let r = mublab(dir.path(), &["--catalog", bad.to_str().unwrap(), "minimize", "--bases", "ABC"]);
    assert_eq!(r.code, 1, "{}", r.stderr);

    let r = mublab(dir.path(), &["--catalog", bad.to_str().unwrap(), "full-report"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let summary = payload(&dir.path().join("summary.json"));
    assert_eq!(summary["passed"], false);
    let check = summary["checks"].as_array().unwrap().iter().find(|c| c["name"] == "mub-validation").unwrap();
    assert_eq!(check["passed"], false);

    let missing = mublab(dir.path(), &["--catalog", "nope.json", "minimize", "--bases", "ABC"]);
    assert_eq!(missing.code, 2);
}

#[test]
fn output_dir_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let (env_dir, flag_dir) = (dir.path().join("from_env"), dir.path().join("from_flag"));
    let run = |extra: &[&str]| {
        Command::new(bin())
            .args(["dump-mubs"])
            .args(extra)
            .current_dir(dir.path())
            .env("MUBLAB_OUTPUT_DIR", &env_dir)
            .output()
            .unwrap()
            .status
    };
    assert!(run(&[]).success());
    assert!(env_dir.join("mubs.json").exists());
    assert!(run(&["--output-dir", flag_dir.to_str().unwrap()]).success());
    assert!(flag_dir.join("mubs.json").exists());

    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "output_dir = \"from_file\"\n").unwrap();
    assert!(run(&["--config", cfg.to_str().unwrap()]).success());
    assert!(!dir.path().join("from_file").exists());
}

#[test]
fn config_file_is_read_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 42\n[optimizer]\nrestarts = 4\n").unwrap();
    let r = mublab(dir.path(), &["--config", cfg.to_str().unwrap(), "minimize", "--bases", "AB"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let env = envelope(&dir.path().join("result.json"));
    assert_eq!(env["config_echo"]["config"]["seed"], 42);
    assert_eq!(env["payload"]["restarts_used"], 4);

    // A flag beats the file.
    let r = mublab(dir.path(), &["--config", cfg.to_str().unwrap(), "--seed", "5", "minimize", "--bases", "AB"]);
    assert_eq!(r.code, 0);
    assert_eq!(envelope(&dir.path().join("result.json"))["config_echo"]["config"]["seed"], 5);

    fs::write(&cfg, "sede = 42\n").unwrap();
    assert_eq!(mublab(dir.path(), &["--config", cfg.to_str().unwrap(), "dump-mubs"]).code, 2);
    fs::write(&cfg, "[montecarlo]\nsamples = 0\n").unwrap();
    assert_eq!(mublab(dir.path(), &["--config", cfg.to_str().unwrap(), "dump-mubs"]).code, 2);
}

#[test]
fn scan_minimum_state_reproduces_the_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let r = mublab(dir.path(), &["scan", "--bases", "BDF", "--samples", "20000", "--bins", "40"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = csv_rows(&dir.path().join("hist.csv"));
    let seen: f64 = footer(&rows, "min_seen").parse().unwrap();
    let state: Value = serde_json::from_str(&footer(&rows, "min_state")).unwrap();
    let oracle = d5_entropy_sum(&amplitudes(&state), "BDF");
    assert!((oracle - seen).abs() < 1e-9, "{oracle} vs {seen}");
    assert!(seen >= S2_BOUND - 1e-9);
    let binned: u64 = rows.iter().take(40).map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(binned + footer(&rows, "underflow").parse::<u64>().unwrap() + footer(&rows, "overflow").parse::<u64>().unwrap(), 20000);
}

const S2_BOUND: f64 = 4.43223;

#[test]
fn variance_minimum_is_reported_with_its_argmin() {
    let dir = tempfile::tempdir().unwrap();
    let r = mublab(dir.path(), &["minimize", "--functional", "variance", "--bases", "ABC"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let p = payload(&dir.path().join("result.json"));
    assert_eq!(p["functional"], "variance");
    assert!((num(&p["minimum"]) - 1.661209).abs() < 1e-5);
}

#[test]
fn detector_states_file_is_renormalized() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states.json");
    fs::write(
        &states,
        r#"[{"id": "doubled", "amplitudes": [{"re": 2, "im": 0}, {"re": 0, "im": 0}, {"re": 0, "im": 0}, {"re": 0, "im": 0}, {"re": 0, "im": 0}]}]"#,
    )
    .unwrap();
    let r = mublab(
        dir.path(),
        &["simulate-detector", "--triplet", "ABE", "--epsilon-profile", "0", "--states", states.to_str().unwrap(), "--random-states", "0"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = csv_rows(&dir.path().join("predictions.csv"));
    let row = rows.iter().find(|r| r[0] == "doubled").unwrap();
    // |0> is an eigenstate of A and unbiased to B and E.
    let ideal: f64 = row[2].parse().unwrap();
    assert!((ideal - 2.0 * log2_5()).abs() < 1e-12);
    assert!((row[3].parse::<f64>().unwrap() - ideal).abs() < 1e-12);
}

#[test]
fn dimension_four_triplets_reach_three() {
    let dir = tempfile::tempdir().unwrap();
    let r = mublab(dir.path(), &["--dim", "4", "minimize", "--bases", "BCE"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let p = payload(&dir.path().join("result.json"));
    assert_eq!(p["dim"], 4);
    assert!((num(&p["minimum"]) - 3.0).abs() < 1e-3);
    // Only A..E exist in d = 4.
    assert_eq!(mublab(dir.path(), &["--dim", "4", "minimize", "--bases", "ABF"]).code, 2);
}

#[test]
fn payloads_do_not_depend_on_workers_or_execution_mode() {
    let dir = tempfile::tempdir().unwrap();
    let variants: [&[&str]; 3] = [&["--workers", "1"], &["--workers", "3"], &["--execution", "sequential"]];
    for cmd in [&["scan", "--bases", "ACE", "--samples", "30000"][..], &["minimize", "--bases", "ACE"][..]] {
        let outputs: Vec<String> = variants
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let out = format!("v{i}.{}", if cmd[0] == "scan" { "csv" } else { "json" });
                let mut args: Vec<&str> = v.to_vec();
                args.extend_from_slice(cmd);
                args.extend(["--out", &out]);
                assert_eq!(mublab(dir.path(), &args).code, 0);
                let path = dir.path().join(&out);
                if cmd[0] == "scan" {
                    csv_body(&path)
                } else {
                    payload_text(&path)
                }
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{} differs across worker settings", cmd[0]);
    }
}

#[test]
fn reduced_full_report_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "[montecarlo]\nsamples = 20000\npair_samples = 20000\nvariance_samples = 20000\n\
         [lemma]\ntrials = 20\n[detector]\nrandom_states = 5\nresamples = 50\nshots = 2000\n",
    )
    .unwrap();
    let r = mublab(dir.path(), &["--config", cfg.to_str().unwrap(), "full-report"]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    let summary = payload(&dir.path().join("summary.json"));
    assert_eq!(summary["passed"], true);
    assert!(summary["headline"]["classes"].as_str().unwrap().starts_with("2 classes"));
    assert_eq!(summary["headline"]["entropy_bounds"], "4.64386 / 4.43223");
    for f in ["mub_validation.csv", "classification_d5.csv", "pairs.csv", "scans.csv", "detector_CDF.csv", "detector_ABE.csv"] {
        assert!(csv_body(&dir.path().join(f)).lines().count() > 1, "{f}");
    }
}
