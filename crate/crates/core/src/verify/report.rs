//! Check reports and their serialized forms.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::verify::grid::SampleGrid;
use crate::verify::Tolerances;

/// Version of the report layout; bumped on any key change.
pub const SCHEMA_VERSION: u32 = 1;

/// Cap on the failing points listed per entry.
pub const WORST_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub point: ChartPoint,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub anchor: String,
    pub max_residual: f64,
    pub argmax: Option<ChartPoint>,
    pub tolerance: f64,
    pub pass: bool,
    pub points_evaluated: usize,
    pub points_excluded: usize,
    pub errored_points: usize,
    /// Up to [`WORST_POINTS`] points above tolerance, worst first.
    pub failing_points: Vec<PointResidual>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedSuite {
    pub suite: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub schema_version: u32,
    pub tool_version: String,
    pub structure: String,
    pub domain: String,
    pub grid: Option<SampleGrid>,
    pub grid_description: String,
    pub seed: Option<u64>,
    pub suites: Vec<String>,
    pub tolerances: Tolerances,
    pub points_in_domain: usize,
    /// Exterior derivative normalizations used by the checks.
    pub conventions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub metadata: ReportMetadata,
    pub entries: Vec<CheckEntry>,
    pub skipped: Vec<SkippedSuite>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.check == name)
    }

    /// Keeps entries sorted by check name.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| a.check.cmp(&b.check));
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["check", "anchor", "max_residual", "argmax_x", "argmax_y", "argmax_z", "tolerance", "pass"])
            .map_err(io)?;
        for e in &self.entries {
            let coord = |f: fn(&ChartPoint) -> f64| e.argmax.as_ref().map(|p| f(p).to_string()).unwrap_or_default();
            w.write_record([
                e.check.clone(),
                e.anchor.clone(),
                e.max_residual.to_string(),
                coord(|p| p.x),
                coord(|p| p.y),
                coord(|p| p.z),
                e.tolerance.to_string(),
                e.pass.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let m = &self.metadata;
        let mut out = format!(
            "structure: {}\ndomain: {}\ngrid: {}\npoints in domain: {}\n\n",
            m.structure, m.domain, m.grid_description, m.points_in_domain
        );
        let width = self.entries.iter().map(|e| e.check.len()).max().unwrap_or(5).max(5);
        out.push_str(&format!(
            "{:<width$}  {:>12}  {:>9}  {:>6}  {:>5}  {}\n",
            "check", "max_residual", "tolerance", "points", "pass", "identity"
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "{:<width$}  {:>12.3e}  {:>9.1e}  {:>6}  {:>5}  {}\n",
                e.check,
                e.max_residual,
                e.tolerance,
                e.points_evaluated,
                if e.pass { "ok" } else { "FAIL" },
                e.anchor
            ));
            if let Some(note) = &e.note {
                out.push_str(&format!("{:<width$}  note: {note}\n", ""));
            }
            if e.errored_points > 0 {
                out.push_str(&format!("{:<width$}  errored points: {}\n", "", e.errored_points));
            }
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped {}: {}\n", s.suite, s.reason));
        }
        out.push_str(&format!(
            "\n{} of {} checks passed\n",
            self.entries.iter().filter(|e| e.pass).count(),
            self.entries.len()
        ));
        out
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Text => Ok(self.to_text()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}'"))),
        }
    }
}

/// Writes `text` to a file, or to standard output when `sink` is `-`.
pub fn write_sink(text: &str, sink: &str) -> Result<()> {
    if sink == "-" {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(text.as_bytes())?;
        lock.flush()?;
    } else {
        let mut w = BufWriter::new(File::create(Path::new(sink))?);
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

pub fn emit_report(report: &CheckReport, format: ReportFormat, sink: &str) -> Result<()> {
    write_sink(&report.render(format)?, sink)
}
