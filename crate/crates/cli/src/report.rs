//! Report tables, CSV/JSON rendering and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use heisconvex_core::ToleranceConfig;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::scenario::{CliError, Format, Scenario};

/// Outcome class of a run, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// Violations or witnesses were found; the expected outcome of refutation demos.
    Violations,
    NonConvergence,
}

impl Status {
    pub fn exit_code(&self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Violations => 1,
            Status::NonConvergence => 3,
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Violations
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Seventeen significant digits, so values survive a round trip.
fn format_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => format_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub const TOLERANCE_COLUMNS: [&str; 4] = ["plane_tol", "fd_step", "conv_tol", "seed"];

fn tolerance_cells(t: &ToleranceConfig) -> [Cell; 4] {
    [
        Cell::Num(t.plane_tol),
        Cell::Num(t.fd_step),
        Cell::Num(t.conv_tol),
        Cell::Int(t.seed),
    ]
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario: Scenario,
    pub status: Status,
    /// Command-specific totals and witnesses.
    pub summary: Value,
    pub table: Table,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        self.status.exit_code()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Header comments (scenario, status, summary), then the table; every row carries the
    /// tolerances it was computed under.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let scenario = serde_json::to_string(&self.scenario).expect("scenario serializes");
        let summary = serde_json::to_string(&self.summary).expect("summary serializes");
        out.push_str(&format!(
            "# heisconvex {} {}\n",
            env!("CARGO_PKG_VERSION"),
            self.scenario.command.name()
        ));
        out.push_str(&format!("# scenario: {scenario}\n"));
        out.push_str(&format!(
            "# status: {}\n",
            serde_json::to_value(self.status).unwrap().as_str().unwrap()
        ));
        out.push_str(&format!("# summary: {summary}\n"));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.table.columns.iter().copied().chain(TOLERANCE_COLUMNS))
            .expect("in-memory write");
        let tol = tolerance_cells(&self.scenario.tolerances);
        for row in &self.table.rows {
            w.write_record(row.iter().chain(tol.iter()).map(Cell::to_csv))
                .expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("utf-8 cells"));
        out
    }

    pub fn to_json(&self) -> String {
        let tol = tolerance_cells(&self.scenario.tolerances);
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self
                    .table
                    .columns
                    .iter()
                    .chain(TOLERANCE_COLUMNS.iter())
                    .zip(row.iter().chain(tol.iter()))
                {
                    obj.insert(name.to_string(), serde_json::to_value(cell).unwrap());
                }
                Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "heisconvex": env!("CARGO_PKG_VERSION"),
            "scenario": self.scenario,
            "status": self.status,
            "summary": self.summary,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
