//! Report envelopes and atomic file emission.
//!
//! JSON files hold the whole envelope. CSV files start with one `#` comment
//! line carrying the envelope, whose payload then describes the columns that
//! follow. Floats are written in shortest round-trip form.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Everything needed to rerun the command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    pub arguments: serde_json::Value,
    pub config: RunConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope<P> {
    pub tool_version: String,
    pub config_echo: ConfigEcho,
    pub timestamp: String,
    /// Wall time up to emission; kept out of the payload so that payloads
    /// stay reproducible.
    pub runtime_seconds: f64,
    pub payload: P,
}

/// Column description used as the payload of a CSV envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvPayload {
    pub columns: Vec<String>,
    pub rows: usize,
}

/// Per-invocation state shared by the writers.
pub struct Context {
    pub config: RunConfig,
    pub echo: ConfigEcho,
    started: Instant,
}

impl Context {
    pub fn new(config: RunConfig, command: &str, arguments: serde_json::Value) -> Self {
        let echo = ConfigEcho { command: command.to_string(), arguments, config: config.clone() };
        Self { config, echo, started: Instant::now() }
    }

    pub fn envelope<P>(&self, payload: P) -> ReportEnvelope<P> {
        ReportEnvelope {
            tool_version: TOOL_VERSION.to_string(),
            config_echo: self.echo.clone(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            runtime_seconds: self.started.elapsed().as_secs_f64(),
            payload,
        }
    }

    pub fn write_json<P: Serialize>(&self, path: &Path, payload: &P) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&self.envelope(payload)).expect("reports serialize");
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }

    pub fn write_csv(&self, path: &Path, table: &CsvTable) -> Result<(), CliError> {
        let payload = CsvPayload { columns: table.header.clone(), rows: table.rows.len() };
        let head = serde_json::to_string(&self.envelope(payload)).expect("reports serialize");
        let mut out = format!("# {head}\n").into_bytes();
        out.extend_from_slice(&table.to_bytes());
        write_atomic(path, &out)
    }
}

/// A rectangular CSV body; footer rows may be appended with
/// [`CsvTable::push`] as long as they have the same width.
#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory write")
    }
}

/// Shortest round-trip text of a float.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let wrap = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(wrap)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(bytes).map_err(wrap)?;
    tmp.as_file().sync_all().map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

/// Splits a CSV file written by [`Context::write_csv`] into its envelope and
/// body.
pub fn split_csv(text: &str) -> Option<(ReportEnvelope<CsvPayload>, &str)> {
    let rest = text.strip_prefix("# ")?;
    let (head, body) = rest.split_once('\n')?;
    Some((serde_json::from_str(head).ok()?, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_envelope_round_trip() {
        let ctx = Context::new(RunConfig::default(), "scan", serde_json::json!({"bases": "AB"}));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/t.csv");
        let mut t = CsvTable::new(&["x", "y"]);
        t.push(vec![num(0.1), "a,b".into()]);
        ctx.write_csv(&path, &t).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let (env, body) = split_csv(&text).unwrap();
        assert_eq!(env.payload.rows, 1);
        assert_eq!(env.config_echo.command, "scan");
        assert_eq!(body, "x,y\n0.1,\"a,b\"\n");
    }

    #[test]
    fn json_envelope_and_no_leftovers() {
        let ctx = Context::new(RunConfig::default(), "minimize", serde_json::Value::Null);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        ctx.write_json(&path, &vec![1.0f64 / 3.0]).unwrap();
        let env: ReportEnvelope<Vec<f64>> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(env.payload, vec![1.0 / 3.0]);
        assert_eq!(env.config_echo.config.seed, 1);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn shortest_round_trip_floats() {
        for x in [0.1, 4.643856189774724, 1e-300, -2.5e17] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
