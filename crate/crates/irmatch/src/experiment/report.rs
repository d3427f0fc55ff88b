//! Experiment reports and their CSV / plot-data serializations.
//!
//! CSV layout: one header line, one row per record, then an aggregate block
//! of `#aggregate,key,value` lines. `.` decimal, `,` separator, LF endings,
//! floats printed with 12 significant digits, so identical runs produce
//! byte-identical files.

use std::fmt;
use std::path::Path;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Bool(_) | Cell::Text(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{}", format_float(*v)),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(v) => write!(f, "{v}"),
        }
    }
}

/// 12 significant digits, scientific notation, stable across runs.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub aggregates: Vec<(String, Cell)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Plot,
}

impl ExperimentReport {
    pub fn aggregate(&self, key: &str) -> Option<&Cell> {
        self.aggregates
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    pub fn aggregate_f64(&self, key: &str) -> Option<f64> {
        self.aggregate(key).and_then(Cell::as_f64)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&cell.to_string());
                first = false;
            }
            out.push('\n');
        }
        if !self.rows.is_empty() {
            for (key, value) in &self.aggregates {
                out.push_str("#aggregate,");
                out.push_str(key);
                out.push(',');
                out.push_str(&value.to_string());
                out.push('\n');
            }
        }
        out
    }

    /// Histogram of the report's gap-like column with the bound aggregates
    /// overlaid, for external plotting.
    pub fn to_plot_data(&self) -> Result<String> {
        let col = ["max_gap", "gap", "loss"]
            .iter()
            .find_map(|name| self.columns.iter().position(|c| c == name))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "report `{}` has no gap column to plot",
                    self.kind
                ))
            })?;
        let values: Vec<f64> = self
            .rows
            .iter()
            .filter_map(|r| r[col].as_f64())
            .collect();
        let mut out = String::from("series,x,y\n");
        if !values.is_empty() {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let bins = 20usize;
            let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
            let mut counts = vec![0u64; bins];
            for &v in &values {
                let mut b = ((v - lo) / width) as usize;
                if b >= bins {
                    b = bins - 1;
                }
                counts[b] += 1;
            }
            for (b, &count) in counts.iter().enumerate() {
                let x = lo + width * (b as f64 + 0.5);
                out.push_str(&format!("hist,{},{count}\n", format_float(x)));
            }
        }
        for (key, value) in &self.aggregates {
            if key.starts_with("bound") {
                out.push_str(&format!("{key},{value},0\n"));
            }
        }
        Ok(out)
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Csv => Ok(self.to_csv()),
            ReportFormat::Plot => self.to_plot_data(),
        }
    }

    pub fn write(&self, format: ReportFormat, path: &Path) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}

/// Emits the report in the requested format.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    report.write(format, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize) -> ExperimentReport {
        ExperimentReport {
            kind: "sample",
            columns: vec!["trial", "gap"],
            rows: (0..rows)
                .map(|t| vec![Cell::Int(t as i64), Cell::Float(t as f64 / 4.0)])
                .collect(),
            aggregates: vec![
                ("trials".into(), Cell::Int(rows as i64)),
                ("bound_gap".into(), Cell::Float(313.494_486_2)),
            ],
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let csv = sample(0).to_csv();
        assert_eq!(csv, "trial,gap\n");
    }

    #[test]
    fn rows_then_aggregates() {
        let csv = sample(10).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 10 + 2);
        assert_eq!(lines[0], "trial,gap");
        assert!(lines[11].starts_with("#aggregate,trials,10"));
    }

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1.00000000000e0");
        assert_eq!(format_float(313.4944862), "3.13494486200e2");
        assert_eq!(format_float(-0.5), "-5.00000000000e-1");
    }

    #[test]
    fn plot_data_has_hist_and_bounds() {
        let plot = sample(40).to_plot_data().unwrap();
        assert!(plot.starts_with("series,x,y\n"));
        assert!(plot.contains("hist,"));
        assert!(plot.contains("bound_gap,"));
    }
}
