//! Tabular reports printed as CSV or JSON lines.

use std::fmt::Write as _;

use serde_json::{Map, Value as Json};

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::Int(v as i64)
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
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(v) => fmt_real(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or_else(|| Json::String(v.to_string()), Json::Number),
            Cell::Int(v) => Json::from(*v),
            Cell::Text(s) => Json::String(s.clone()),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Empty => Json::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Cleared when a row fails its self-check.
    pub checks_passed: bool,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            checks_passed: true,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(Cell::csv).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            OutputFormat::JsonLines => {
                for r in &self.rows {
                    let mut m = Map::new();
                    for (c, v) in self.columns.iter().zip(r) {
                        m.insert((*c).to_string(), v.json());
                    }
                    let _ = writeln!(out, "{}", Json::Object(m));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_reals_roundtrip() {
        let xs = [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 6.02214076e23, -0.0];
        let mut r = Report::new(&["x"]);
        for x in xs {
            r.push(vec![x.into()]);
        }
        let text = r.render(OutputFormat::JsonLines);
        for (line, x) in text.lines().zip(xs) {
            let v: Json = serde_json::from_str(line).unwrap();
            assert_eq!(v["x"].as_f64().unwrap().to_bits(), x.to_bits());
        }
        let csv = r.render(OutputFormat::Csv);
        for (line, x) in csv.lines().skip(1).zip(xs) {
            assert_eq!(line.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn csv_quoting_and_empty() {
        let mut r = Report::new(&["a", "b"]);
        r.push(vec!["x,y".into(), Cell::Empty]);
        assert_eq!(r.render(OutputFormat::Csv), "a,b\n\"x,y\",\n");
    }
}
