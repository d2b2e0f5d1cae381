//! Report emission: CSV tables with a fixed column order and lossless float
//! formatting, plus small summary helpers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::CliError;

/// One CSV cell. Floats are rendered with 17 significant digits so every
/// value round-trips through `str::parse::<f64>` without loss.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

/// 17-significant-digit scientific notation; parses back to the same f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Renders the table as CSV. Empty rows still produce the header line.
    /// A NaN anywhere is a schema violation and fails the whole report.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for (i, row) in self.rows.iter().enumerate() {
            let mut fields = Vec::with_capacity(row.len());
            for (cell, col) in row.iter().zip(&self.columns) {
                match cell {
                    Cell::Text(s) => fields.push(s.clone()),
                    Cell::Int(v) => fields.push(v.to_string()),
                    Cell::Float(v) => {
                        if v.is_nan() {
                            return Err(CliError::Computation(format!(
                                "NaN in output row {} column `{col}`",
                                i + 1
                            )));
                        }
                        fields.push(fmt_float(*v));
                    }
                }
            }
            let _ = writeln!(out, "{}", fields.join(","));
        }
        Ok(out)
    }
}

/// Writes `text` to `path` when given, otherwise to stdout.
pub fn write_text(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| {
            CliError::Computation(format!("cannot write {}: {e}", p.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Computation(format!("cannot write to stdout: {e}")))
        }
    }
}

/// (min, max, geometric mean) of ratios given in log space.
pub fn ratio_summary(log_ratios: &[f64]) -> (f64, f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &lr in log_ratios {
        lo = lo.min(lr);
        hi = hi.max(lr);
        sum += lr;
    }
    (
        lo.exp(),
        hi.exp(),
        (sum / log_ratios.len() as f64).exp(),
    )
}
