//! Persisted experiment configuration and results.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::PartitionSpec;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Er,
    Multipartite,
    Bipartite,
    Convergence,
    Table,
    Kyfan,
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| Error::Parameter(format!("unknown experiment kind {s:?}")))
    }
}

fn default_n() -> usize {
    2000
}

fn default_p() -> f64 {
    0.5
}

fn default_trials() -> usize {
    8
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_p")]
    pub p: f64,
    /// Explicit part fractions for multipartite and bipartite runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<PartitionSpec>,
    /// Number of equal parts, as an alternative to `parts`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Bipartite ratio `nu2 / nu1`, as an alternative to `parts`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    /// Use `floor(sqrt n)` equal parts and compare with the vanishing-parts law.
    #[serde(default)]
    pub vanishing_parts: bool,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
    /// Also solve the centered matrix per trial (KS distance, energy bracket).
    #[serde(default = "default_true")]
    pub centered: bool,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            n: default_n(),
            p: default_p(),
            parts: None,
            m: None,
            y: None,
            vanishing_parts: false,
            trials: default_trials(),
            seed: 0,
            tolerance: None,
            n_list: None,
            y_list: None,
            count: None,
            max_n: None,
            centered: true,
        }
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_error(origin, &e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read(path)?, path)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStat {
    pub trial: usize,
    pub n: usize,
    pub seed: u64,
    pub energy: f64,
    /// `energy / n^{3/2}`
    pub coefficient: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centered_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<f64>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Option<Aggregate> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Aggregate {
            count,
            mean,
            std,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

/// The limiting value a run is compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub n: usize,
    pub mean_ks: f64,
    pub ks: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub y: f64,
    pub theory_coeff: f64,
    pub lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KyFanSummary {
    pub pairs: usize,
    pub min_gap: f64,
    pub mean_gap: f64,
    /// Smallest gap divided by `||X||_F + ||Y||_F`.
    pub min_relative_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub config: ExperimentConfig,
    #[serde(default)]
    pub trials: Vec<TrialStat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<TrialFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<Aggregate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<Theory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kyfan: Option<KyFanSummary>,
    #[serde(default)]
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunRecord {
    pub fn new(config: ExperimentConfig) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            version: ARTIFACT_VERSION.to_owned(),
            timestamp,
            config,
            trials: Vec::new(),
            failures: Vec::new(),
            aggregate: None,
            theory: None,
            relative_error: None,
            ladder: Vec::new(),
            table: Vec::new(),
            kyfan: None,
            checks: Vec::new(),
            passed: false,
            warnings: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckOutcome {
            name: name.to_owned(),
            passed,
            detail,
        });
    }

    pub fn all_checks_pass(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// CSV with header `trial,energy,coefficient,ks,seconds`; `ks` is empty
    /// when not computed.
    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,energy,coefficient,ks,seconds\n");
        for t in &self.trials {
            let ks = t.ks.map(|k| k.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                t.trial, t.energy, t.coefficient, ks, t.seconds
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Parses a record; a version different from this build adds a warning.
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let mut record: RunRecord =
            serde_json::from_str(text).map_err(|e| parse_error(origin, &e))?;
        if record.version != ARTIFACT_VERSION {
            record.warnings.push(format!(
                "record written by version {}, read by {ARTIFACT_VERSION}",
                record.version
            ));
        }
        Ok(record)
    }
}

/// CSV with header `y,theory_coeff,lower_bound`, values formatted by `fmt`.
pub fn table_csv(rows: &[TableRow], fmt: impl Fn(f64) -> String) -> String {
    let mut out = String::from("y,theory_coeff,lower_bound\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.y,
            fmt(r.theory_coeff),
            fmt(r.lower_bound)
        );
    }
    out
}

pub fn save_record(record: &RunRecord, path: &Path) -> Result<()> {
    std::fs::write(path, record.to_json() + "\n").map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_record(path: &Path) -> Result<RunRecord> {
    RunRecord::from_json(&read(path)?, path)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse_error(path: &Path, e: &serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    }
}
