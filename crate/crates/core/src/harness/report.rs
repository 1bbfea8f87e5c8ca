//! Per-trial experiment records and their NDJSON / CSV serialisation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    PreconditionViolated,
}

/// One trial of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub scenario_id: String,
    pub trial: usize,
    /// Entropy floor used by the bound.
    pub t: Option<f64>,
    pub epsilon_target: Option<f64>,
    pub delta_measured: f64,
    pub bound_value: f64,
    pub pass: bool,
    pub status: Status,
    /// Wall-clock time; recorded in NDJSON only so the CSV stays reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    pub seed: u64,
}

impl ExperimentReport {
    /// A record whose pass flag is `delta_measured <= bound_value + 1e-8`.
    pub fn checked(
        scenario_id: &str,
        trial: usize,
        seed: u64,
        t: Option<f64>,
        epsilon_target: Option<f64>,
        delta_measured: f64,
        bound_value: f64,
    ) -> Self {
        let pass = delta_measured <= bound_value + tol::REPORT;
        Self {
            scenario_id: scenario_id.to_string(),
            trial,
            t,
            epsilon_target,
            delta_measured,
            bound_value,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            runtime_ms: None,
            seed,
        }
    }

    /// Marks the record as not applicable: the input did not meet the
    /// entropy hypothesis of the bound.
    pub fn into_precondition_violated(mut self) -> Self {
        self.pass = false;
        self.status = Status::PreconditionViolated;
        self
    }

    pub fn with_runtime(mut self, ms: f64) -> Self {
        self.runtime_ms = Some(ms);
        self
    }
}

/// CSV row: every field except the runtime.
#[derive(Serialize, Deserialize)]
struct CsvRow {
    scenario_id: String,
    trial: usize,
    t: Option<f64>,
    epsilon_target: Option<f64>,
    delta_measured: f64,
    bound_value: f64,
    pass: bool,
    status: Status,
    seed: u64,
}

impl From<&ExperimentReport> for CsvRow {
    fn from(r: &ExperimentReport) -> Self {
        Self {
            scenario_id: r.scenario_id.clone(),
            trial: r.trial,
            t: r.t,
            epsilon_target: r.epsilon_target,
            delta_measured: r.delta_measured,
            bound_value: r.bound_value,
            pass: r.pass,
            status: r.status,
            seed: r.seed,
        }
    }
}

impl From<CsvRow> for ExperimentReport {
    fn from(r: CsvRow) -> Self {
        Self {
            scenario_id: r.scenario_id,
            trial: r.trial,
            t: r.t,
            epsilon_target: r.epsilon_target,
            delta_measured: r.delta_measured,
            bound_value: r.bound_value,
            pass: r.pass,
            status: r.status,
            runtime_ms: None,
            seed: r.seed,
        }
    }
}

pub const CSV_HEADER: &str =
    "scenario_id,trial,t,epsilon_target,delta_measured,bound_value,pass,status,seed";

/// Fraction of records with `pass == true`.
pub fn pass_rate(records: &[ExperimentReport]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.pass).count() as f64 / records.len() as f64
}

/// CSV text: header, one row per record, and a trailing `# pass_rate=`
/// comment line when there is at least one record.
pub fn to_csv(records: &[ExperimentReport]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in records {
        w.serialize(CsvRow::from(r)).map_err(csv_err)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
        .expect("csv output is UTF-8");
    let mut out = format!("{CSV_HEADER}\n{body}");
    if !records.is_empty() {
        let passed = records.iter().filter(|r| r.pass).count();
        out.push_str(&format!(
            "# pass_rate={}/{}={}\n",
            passed,
            records.len(),
            pass_rate(records)
        ));
    }
    Ok(out)
}

pub fn from_csv(text: &str) -> Result<Vec<ExperimentReport>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    rd.deserialize::<CsvRow>()
        .map(|row| row.map(ExperimentReport::from).map_err(csv_err))
        .collect()
}

pub fn to_ndjson(records: &[ExperimentReport]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("report serialises") + "\n")
        .collect()
}

pub fn from_ndjson(text: &str) -> Result<Vec<ExperimentReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Io(e.to_string())))
        .collect()
}

/// Writes `<dir>/<stem>.ndjson` and `<dir>/<stem>.csv`.
pub fn emit_report(records: &[ExperimentReport], dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let json_path = dir.join(format!("{stem}.ndjson"));
    let csv_path = dir.join(format!("{stem}.csv"));
    fs::File::create(&json_path)?.write_all(to_ndjson(records).as_bytes())?;
    fs::File::create(&csv_path)?.write_all(to_csv(records)?.as_bytes())?;
    Ok((json_path, csv_path))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
