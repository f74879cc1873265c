//! Report rows and their CSV / JSON encodings.
//!
//! Integers are written verbatim. Reals are written with 12 significant
//! digits so emitted files are stable across runs.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Duration;

use serde_json::{json, Map, Value};

use rsad_core::{ProbeRow, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Brute,
    Identity,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Identity => "identity",
            Method::Both => "both",
        }
    }
}

/// Formats `v` with 12 significant digits, never in exponent form for
/// magnitudes in `[1e-4, 1e15)`.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

/// `v` rounded to what [`fmt_real`] prints.
pub fn round_real(v: f64) -> f64 {
    fmt_real(v).parse().unwrap_or(v)
}

/// One evaluation of `C_r(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub x: u64,
    pub r: Ratio,
    pub exact: u64,
    pub estimate: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub method: Method,
    pub elapsed: Duration,
}

impl CountReport {
    pub fn new(
        x: u64,
        r: Ratio,
        exact: u64,
        estimate: f64,
        method: Method,
        elapsed: Duration,
    ) -> Self {
        let abs_error = (exact as f64 - estimate).abs();
        CountReport {
            x,
            r,
            exact,
            estimate,
            abs_error,
            rel_error: abs_error / exact.max(1) as f64,
            method,
            elapsed,
        }
    }
}

/// A column value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) => json!(round_real(*v)),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Header plus rows, written as CSV or a JSON array of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub const COUNT_HEADER: [&str; 8] = [
    "x", "r", "method", "exact", "estimate", "abs_err", "rel_err", "seconds",
];

pub const CONVERGENCE_HEADER: [&str; 9] = [
    "x",
    "r",
    "exact",
    "estimate",
    "abs_err",
    "rel_err",
    "ratio",
    "err_normalized",
    "seconds",
];

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W, format: Format) -> io::Result<()> {
        w.write_all(self.render(format).as_bytes())
    }
}

pub fn count_row(rep: &CountReport) -> Vec<Cell> {
    vec![
        Cell::Int(rep.x),
        Cell::Text(rep.r.to_string()),
        Cell::Text(rep.method.as_str().to_string()),
        Cell::Int(rep.exact),
        Cell::Real(rep.estimate),
        Cell::Real(rep.abs_error),
        Cell::Real(rep.rel_error),
        Cell::Real(rep.elapsed.as_secs_f64()),
    ]
}

pub fn convergence_row(row: &ProbeRow, seconds: f64) -> Vec<Cell> {
    let abs_err = row.abs_error();
    vec![
        Cell::Int(row.scale),
        Cell::Text(row.r.to_string()),
        Cell::Int(row.exact),
        Cell::Real(row.main_term),
        Cell::Real(abs_err),
        Cell::Real(abs_err / row.exact.max(1) as f64),
        Cell::Real(row.ratio),
        Cell::Real(row.err_normalized),
        Cell::Real(seconds),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(
            fmt_real(1.0 / 2.0 + 1.0 / 3.0 + 1.0 / 5.0 + 1.0 / 7.0),
            "1.17619047619"
        );
        assert_eq!(fmt_real(7263.092555790381), "7263.09255579");
        assert_eq!(fmt_real(408548.9562632088), "408548.956263");
        assert_eq!(fmt_real(0.05017166594399687), "0.0501716659440");
        assert_eq!(fmt_real(-2.5), "-2.50000000000");
        assert_eq!(fmt_real(1e20), "1.00000000000e20");
        assert_eq!(fmt_real(1.5e-9), "1.50000000000e-9");
    }

    #[test]
    fn csv_and_json_share_fields() {
        let mut t = Table::new(&["x", "r", "v"]);
        t.push(vec![
            Cell::Int(123_456_789_012),
            Cell::Text("3/2".into()),
            Cell::Real(0.1),
        ]);
        assert_eq!(t.to_csv(), "x,r,v\n123456789012,3/2,0.100000000000\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["x"], json!(123_456_789_012u64));
        assert_eq!(v[0]["r"], json!("3/2"));
        assert_eq!(v[0]["v"], json!(0.1));
    }

    #[test]
    fn count_report_errors() {
        let r = Ratio::new(2, 1).unwrap();
        let rep = CountReport::new(100, r, 5, 6.5, Method::Identity, Duration::ZERO);
        assert_eq!(rep.abs_error, 1.5);
        assert_eq!(rep.rel_error, 0.3);
        let zero = CountReport::new(100, Ratio::ONE, 0, 0.0, Method::Brute, Duration::ZERO);
        assert_eq!(zero.rel_error, 0.0);
    }
}
