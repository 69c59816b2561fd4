use std::fmt::Write as _;
use std::path::Path;

use cogrowth_oracle::WalkCountTable;
use cogrowth_series::{QPolynomial, QZSeries};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// CSV for `.csv` paths, JSON otherwise.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Keeps only the `q^0` term of each coefficient.
pub fn constant_terms(series: &QZSeries) -> QZSeries {
    QZSeries::from_coeffs(
        series
            .q_constant_term()
            .into_iter()
            .map(QPolynomial::constant)
            .collect(),
    )
}

pub fn series_json(series: &QZSeries) -> Value {
    serde_json::to_value(series).expect("series serialization is infallible")
}

/// The series JSON with one order per line.
pub fn series_text(series: &QZSeries) -> String {
    let rows = match series_json(series) {
        Value::Array(rows) => rows,
        _ => unreachable!("series serialize as arrays"),
    };
    let lines: Vec<String> = rows.iter().map(|r| format!("  {r}")).collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}

/// `n,m,count` rows with zero entries omitted.
pub fn series_csv(series: &QZSeries) -> String {
    let mut out = String::from("n,m,count\n");
    for (n, c) in series.coeffs().iter().enumerate() {
        for (m, x) in c.terms() {
            if !x.is_zero() {
                let _ = writeln!(out, "{n},{m},{x}");
            }
        }
    }
    out
}

pub fn table_csv(table: &WalkCountTable) -> String {
    let mut out = String::from("n,m,count\n");
    for ((n, m), f) in &table.counts {
        let _ = writeln!(out, "{n},{m},{f}");
    }
    out
}

pub fn table_json(table: &WalkCountTable) -> Value {
    serde_json::to_value(table).expect("table serialization is infallible")
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// A floating-point field, `null` when absent or not finite.
pub fn number(x: Option<f64>) -> Value {
    match x {
        Some(v) if v.is_finite() => json!(v),
        _ => Value::Null,
    }
}
