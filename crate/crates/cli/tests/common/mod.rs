//! Shared helpers: running the binary, reading reports, and an oracle for
//! the d = 5 catalog built directly from the quadratic-phase formula.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use mublab_core::C64;
use serde_json::Value;

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_mublab"))
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
}

/// Runs the binary in `dir` with the output directory pinned to it.
pub fn mublab(dir: &Path, args: &[&str]) -> Run {
    let started = Instant::now();
    let out: Output = Command::new(bin())
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .current_dir(dir)
        .env_remove("MUBLAB_OUTPUT_DIR")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        elapsed: started.elapsed(),
    }
}

pub fn envelope(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("valid JSON")
}

pub fn payload(path: &Path) -> Value {
    envelope(path)["payload"].take()
}

/// Raw text of the payload member, which is written last in the envelope.
pub fn payload_text(path: &Path) -> String {
    let text = std::fs::read_to_string(path).expect("readable");
    let at = text.find("\"payload\":").expect("payload member");
    text[at..].to_string()
}

/// CSV body without the envelope comment line.
pub fn csv_body(path: &Path) -> String {
    let text = std::fs::read_to_string(path).expect("readable");
    let (head, body) = text.split_once('\n').expect("two parts");
    assert!(head.starts_with("# {"), "missing envelope line in {}", path.display());
    body.to_string()
}

pub fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let body = csv_body(path);
    let mut r = csv::Reader::from_reader(body.as_bytes());
    r.records().map(|rec| rec.expect("valid row").iter().map(str::to_string).collect()).collect()
}

/// Value of footer row `key` in a histogram CSV.
pub fn footer(rows: &[Vec<String>], key: &str) -> String {
    rows.iter().find(|r| r[0] == key).unwrap_or_else(|| panic!("no footer {key}"))[1].clone()
}

pub fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

pub fn amplitudes(state: &Value) -> Vec<C64> {
    state["amplitudes"]
        .as_array()
        .expect("amplitudes")
        .iter()
        .map(|z| C64::new(num(&z["re"]), num(&z["im"])))
        .collect()
}

pub fn log2_5() -> f64 {
    5f64.log2()
}

/// Column j of basis `letter` in d = 5: A is the identity, the others are
/// ω^{n i² + i j}/√5 with n = 0, 1, 3, 2, 4 for B, C, D, E, F.
pub fn d5_column(letter: char, j: usize) -> Vec<C64> {
    let n = match letter {
        'A' => return (0..5).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect(),
        'B' => 0,
        'C' => 1,
        'D' => 3,
        'E' => 2,
        'F' => 4,
        other => panic!("no basis {other}"),
    };
    (0..5)
        .map(|i| {
            let k = (n * i * i + i * j) % 5;
            C64::from_polar(1.0 / 5f64.sqrt(), 2.0 * std::f64::consts::PI * k as f64 / 5.0)
        })
        .collect()
}

pub fn d5_entropy(psi: &[C64], letter: char) -> f64 {
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    (0..5)
        .map(|j| {
            let col = d5_column(letter, j);
            let p = col.iter().zip(psi).map(|(c, a)| c.conj() * a).sum::<C64>().norm_sqr() / norm;
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        })
        .sum()
}

pub fn d5_entropy_sum(psi: &[C64], letters: &str) -> f64 {
    letters.chars().map(|l| d5_entropy(psi, l)).sum()
}

pub fn polar(moduli: &[f64], phases: &[f64]) -> Vec<C64> {
    moduli.iter().zip(phases).map(|(&r, &t)| C64::from_polar(r, t)).collect()
}

pub fn choose(letters: &str, k: usize) -> Vec<String> {
    if k == 0 {
        return vec![String::new()];
    }
    let chars: Vec<char> = letters.chars().collect();
    let mut out = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        let rest: String = chars[i + 1..].iter().collect();
        for tail in choose(&rest, k - 1) {
            out.push(format!("{c}{tail}"));
        }
    }
    out
}
