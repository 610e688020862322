use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::Row;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Output of one experiment: verdicts, a free-form JSON summary and the
/// trajectory rows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub config_hash: String,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
    pub summary: serde_json::Value,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(experiment: impl Into<String>, config_hash: impl Into<String>) -> Self {
        Self { experiment: experiment.into(), config_hash: config_hash.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Process exit code: 0 when every verdict passes.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

/// Paths written by [`emit_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
}

/// Writes `<dir>/<experiment>.csv` (one row per observation) and
/// `<dir>/<experiment>.json`, creating `dir` if needed.
pub fn emit_report(report: &Report, dir: &Path) -> Result<ReportFiles> {
    std::fs::create_dir_all(dir)?;
    let name = if report.experiment.is_empty() { "report" } else { report.experiment.as_str() };
    let csv = dir.join(format!("{name}.csv"));
    let json = dir.join(format!("{name}.json"));
    let mut w = csv::Writer::from_path(&csv)?;
    // the header is written explicitly so that an empty report still has one
    w.write_record(["t", "observable_id", "value", "replica", "N", "seed"])?;
    for r in &report.rows {
        w.write_record([
            r.t.to_string(),
            r.observable_id.clone(),
            r.value.to_string(),
            r.replica.to_string(),
            r.n.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(&json, text)?;
    Ok(ReportFiles { csv, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_has_header_and_valid_json() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&Report::new("empty", "0"), dir.path()).unwrap();
        assert_eq!(std::fs::read_to_string(&files.csv).unwrap(), "t,observable_id,value,replica,N,seed\n");
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files.json).unwrap()).unwrap();
        for key in ["experiment", "verdicts", "warnings"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn exit_code_follows_verdicts() {
        let mut r = Report::new("x", "h");
        assert_eq!(r.exit_code(), 0);
        r.verdicts.push(Verdict::new("a", true, ""));
        assert_eq!(r.exit_code(), 0);
        r.verdicts.push(Verdict::new("b", false, ""));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn rows_are_written_in_schema_order() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = Report::new("rows", "h");
        r.rows.push(Row { t: 0.5, observable_id: "X".into(), value: 3.0, replica: 2, n: 16, seed: 7 });
        let files = emit_report(&r, dir.path()).unwrap();
        let text = std::fs::read_to_string(&files.csv).unwrap();
        assert_eq!(text.lines().nth(1), Some("0.5,X,3,2,16,7"));
        let again = emit_report(&r, dir.path()).unwrap();
        assert_eq!(std::fs::read_to_string(again.csv).unwrap(), text);
    }
}
