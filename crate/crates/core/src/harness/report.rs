use std::fmt;

use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            // shortest round-trip representation, stable across runs
            Cell::Float(v) => write!(f, "{v:?}"),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(&csv_escape(s)),
            Cell::Empty => Ok(()),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        // seeds are written verbatim; values above i64::MAX go through text
        i64::try_from(v).map_or_else(|_| Cell::Text(v.to_string()), Cell::Int)
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

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub suite: String,
    pub seed: u64,
    /// SHA-256 of the canonical config JSON.
    pub config_hash: String,
    pub version: String,
    pub wall_time_s: f64,
}

/// A failed assertion, with the row it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub violations: Vec<Violation>,
    pub meta: Meta,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    obj.insert(c.clone(), serde_json::to_value(v).expect("cells serialize"));
                }
                Value::Object(obj)
            })
            .collect();
        json!({ "meta": self.meta, "columns": self.columns, "rows": rows, "violations": self.violations })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Fixed-width text table for the terminal.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(table_cell).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| {
            items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
        };
        let mut out = line(self.columns.iter().map(String::as_str).collect());
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

fn table_cell(c: &Cell) -> String {
    match c {
        Cell::Float(v) => format!("{v:.10}"),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json() {
        let r = ExperimentReport {
            columns: vec!["a".into(), "b".into(), "c".into()],
            rows: vec![vec![1usize.into(), 0.1.into(), "x,y".into()], vec![2usize.into(), Cell::Empty, true.into()]],
            violations: vec![],
            meta: Meta { suite: "t".into(), seed: 0, config_hash: String::new(), version: "0".into(), wall_time_s: 0.0 },
        };
        assert_eq!(r.to_csv(), "a,b,c\n1,0.1,\"x,y\"\n2,,true\n");
        let j = r.to_json();
        assert_eq!(j["rows"][0]["b"], 0.1);
        assert!(j["rows"][1]["b"].is_null());
        assert!(r.to_table().lines().count() == 3);
    }
}
