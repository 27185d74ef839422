//! Column tables and their CSV / JSON encodings.

use crate::error::{CliError, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Uint(u64),
}

impl Cell {
    fn csv(&self, out: &mut String) {
        match self {
            Cell::Float(v) => write!(out, "{v}"),
            Cell::Int(v) => write!(out, "{v}"),
            Cell::Uint(v) => write!(out, "{v}"),
        }
        .expect("writing to a String cannot fail");
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into),
            Cell::Int(v) => (*v).into(),
            Cell::Uint(v) => (*v).into(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Uint(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Uint(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

/// The data families written by `run` and understood by `replot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataKind {
    Scan,
    PhaseDiagram,
    DisorderRuns,
    DisorderSummary,
    Edge,
    EdgeSummary,
    Intensity,
    Emulation,
    McSets,
}

pub const SCAN_HEADER: &[&str] = &["theta1_pi", "theta2_pi", "Q0", "Qpi", "residual", "t"];
pub const DISORDER_RUNS_HEADER: &[&str] = &["p", "config", "half_r0", "t", "seed"];
pub const DISORDER_SUMMARY_HEADER: &[&str] = &["p", "mean_half_r0", "std_half_r0", "n_configs", "t"];
pub const EDGE_HEADER: &[&str] = &["p", "config", "P_loc", "t"];
pub const EDGE_SUMMARY_HEADER: &[&str] = &["p", "mean_P_loc", "std_P_loc", "n_configs", "t"];
pub const INTENSITY_HEADER: &[&str] = &["step", "position", "intensity"];
pub const EMULATION_HEADER: &[&str] = &["j", "magnitude", "signed_amplitude", "relation", "delta_i"];
pub const MC_HEADER: &[&str] =
    &["set", "loss_asymmetry", "eom_error_deg", "sbc_error_deg", "distance", "dev_Q0", "dev_Qpi"];

impl DataKind {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            DataKind::Scan | DataKind::PhaseDiagram => SCAN_HEADER,
            DataKind::DisorderRuns => DISORDER_RUNS_HEADER,
            DataKind::DisorderSummary => DISORDER_SUMMARY_HEADER,
            DataKind::Edge => EDGE_HEADER,
            DataKind::EdgeSummary => EDGE_SUMMARY_HEADER,
            DataKind::Intensity => INTENSITY_HEADER,
            DataKind::Emulation => EMULATION_HEADER,
            DataKind::McSets => MC_HEADER,
        }
    }

    /// Identifies a data file from its header line and file stem. Scan and
    /// phase-diagram files share columns and differ by stem.
    pub fn detect(header: &str, stem: &str) -> Option<DataKind> {
        let cols: Vec<&str> = header.trim_end().split(',').collect();
        let all = [
            DataKind::Scan,
            DataKind::DisorderRuns,
            DataKind::DisorderSummary,
            DataKind::Edge,
            DataKind::EdgeSummary,
            DataKind::Intensity,
            DataKind::Emulation,
            DataKind::McSets,
        ];
        let kind = all.into_iter().find(|k| k.header() == cols.as_slice())?;
        if kind == DataKind::Scan && stem.starts_with("phase_diagram") {
            Some(DataKind::PhaseDiagram)
        } else {
            Some(kind)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: DataKind,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(kind: DataKind) -> Self {
        Table { kind, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.kind.header().len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.kind.header().join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                cell.csv(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let header = self.kind.header();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> =
                    header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect();
                obj.into()
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("plain values serialize");
        s.push('\n');
        s
    }

    /// Numeric view of the rows, exactly as a reader of the CSV sees them.
    pub fn numeric(&self) -> Vec<Vec<f64>> {
        parse_rows(&self.to_csv()).expect("own CSV parses")
    }
}

/// Parses the data rows of a CSV file (header skipped) into numbers.
pub fn parse_rows(text: &str) -> std::result::Result<Vec<Vec<f64>>, String> {
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(k, line)| {
            line.split(',').map(|f| f.parse::<f64>().map_err(|e| format!("row {}: `{f}`: {e}", k + 1))).collect()
        })
        .collect()
}

/// A CSV file on disk with a recognized header.
pub struct DataFile {
    pub kind: DataKind,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_data_file(path: &Path) -> Result<Option<DataFile>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    let Some(kind) = text.lines().next().and_then(|h| DataKind::detect(h, stem)) else {
        return Ok(None);
    };
    let rows =
        parse_rows(&text).map_err(|m| CliError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, m)))?;
    Ok(Some(DataFile { kind, rows }))
}
