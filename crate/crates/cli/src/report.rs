use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wcop::Complex64;

use crate::config::ExperimentConfig;
use crate::CliError;

/// One checked quantity. `tag` names the result the check reproduces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub tag: String,
    pub predicted: Value,
    pub observed: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    /// `|observed - predicted| ≤ tolerance`.
    pub fn within(name: &str, tag: &str, predicted: f64, observed: f64, tolerance: f64) -> Record {
        Record {
            name: name.into(),
            tag: tag.into(),
            predicted: predicted.into(),
            observed: observed.into(),
            tolerance: Some(tolerance),
            pass: (observed - predicted).abs() <= tolerance,
            note: None,
        }
    }

    /// `observed ≤ bound + tolerance`.
    pub fn at_most(name: &str, tag: &str, bound: f64, observed: f64, tolerance: f64) -> Record {
        Record {
            name: name.into(),
            tag: tag.into(),
            predicted: bound.into(),
            observed: observed.into(),
            tolerance: Some(tolerance),
            pass: observed <= bound + tolerance,
            note: None,
        }
    }

    /// Exact agreement of two labels.
    pub fn equal(name: &str, tag: &str, predicted: &str, observed: &str) -> Record {
        Record {
            name: name.into(),
            tag: tag.into(),
            predicted: predicted.into(),
            observed: observed.into(),
            tolerance: None,
            pass: predicted == observed,
            note: None,
        }
    }

    /// A check that raised an error instead of producing a value.
    pub fn errored(name: &str, tag: &str, err: &dyn std::fmt::Display) -> Record {
        Record {
            name: name.into(),
            tag: tag.into(),
            predicted: Value::Null,
            observed: Value::Null,
            tolerance: None,
            pass: false,
            note: Some(err.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Record {
        self.note = Some(note.into());
        self
    }
}

/// A point set written as CSV next to the report.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub file: String,
    pub points: Vec<Complex64>,
}

/// Everything a command produced. Serializes deterministically: no
/// timestamps, no hash maps; wall time goes to `timing.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub passed: bool,
    pub records: Vec<Record>,
    pub data: Value,
    pub artifacts: Vec<String>,
    #[serde(skip)]
    pub points: Vec<Artifact>,
}

impl Report {
    pub fn new(command: &str, cfg: &ExperimentConfig) -> Report {
        Report {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            passed: true,
            records: Vec::new(),
            data: Value::Null,
            artifacts: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        self.passed &= record.pass;
        self.records.push(record);
    }

    pub fn attach(&mut self, file: &str, points: Vec<Complex64>) {
        self.artifacts.push(file.into());
        self.points.push(Artifact { file: file.into(), points });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (config {})\n", self.command, &self.config_hash[..12]);
        for r in &self.records {
            out.push_str(&format!(
                "[{}] {} ({}): observed {}, predicted {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.tag,
                r.observed,
                r.predicted
            ));
            if let Some(t) = r.tolerance {
                out.push_str(&format!(", tolerance {t:e}"));
            }
            if let Some(n) = &r.note {
                out.push_str(&format!(" [{n}]"));
            }
            out.push('\n');
        }
        if !self.data.is_null() {
            out.push_str(&serde_json::to_string_pretty(&self.data).expect("data serializes"));
            out.push('\n');
        }
        if !self.records.is_empty() {
            let failed = self.records.iter().filter(|r| !r.pass).count();
            out.push_str(&format!("{} of {} checks passed\n", self.records.len() - failed, self.records.len()));
        }
        out
    }

    /// Writes `report.json`, `timing.json` and the CSV artifacts into `dir`.
    pub fn write(&self, dir: &Path, wall_seconds: f64) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Output(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        fs::write(dir.join("report.json"), self.to_json()).map_err(io)?;
        let timing = serde_json::json!({ "command": self.command, "wall_seconds": wall_seconds });
        fs::write(dir.join("timing.json"), format!("{timing:#}\n")).map_err(io)?;
        for a in &self.points {
            write_csv(&dir.join(&a.file), &a.points)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Row {
    re: f64,
    im: f64,
}

/// Point cloud with header `re,im`.
pub fn write_csv(path: &Path, points: &[Complex64]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Output(format!("{}: {e}", path.display()));
    // header written by hand so that an empty cloud still has one
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(err)?;
    w.write_record(["re", "im"]).map_err(err)?;
    for p in points {
        w.serialize(Row { re: p.re, im: p.im }).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}
