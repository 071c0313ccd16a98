//! Run reports: check statuses, tables, fingerprint and the config echo.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fingerprint {
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub threads: usize,
    pub seed: u64,
}

impl Fingerprint {
    pub fn current(seed: u64) -> Self {
        Fingerprint {
            version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            threads: rayon::current_num_threads(),
            seed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, serde_json::Value>,
    pub fingerprint: Fingerprint,
    pub config: ExperimentConfig,
}

impl RunReport {
    pub fn new(command: &str, config: &ExperimentConfig) -> Self {
        RunReport {
            command: command.into(),
            checks: Vec::new(),
            tables: BTreeMap::new(),
            fingerprint: Fingerprint::current(config.seed),
            config: config.clone(),
        }
    }

    /// Records a check; names must be unique within a report.
    pub fn check(&mut self, name: &str, status: Status, value: Option<f64>, threshold: Option<f64>, detail: String) {
        assert!(self.checks.iter().all(|c| c.name != name), "duplicate check {name}");
        self.checks.push(Check { name: name.into(), status, value, threshold, detail });
    }

    pub fn table<T: Serialize>(&mut self, name: &str, rows: &T) {
        let v = serde_json::to_value(rows).unwrap_or(serde_json::Value::Null);
        self.tables.insert(name.into(), v);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn summary(&self) -> String {
        let mut s = format!("dbar {} ({} checks)\n", self.command, self.checks.len());
        for c in &self.checks {
            s.push_str(&format!("  {:<4} {:<28} {}\n", c.status.to_string(), c.name, c.detail));
        }
        s
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(path, text)?;
        Ok(())
    }
}
