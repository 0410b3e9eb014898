//! Tables written as CSV or JSON.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), enough for an
//! exact round trip. Output always ends with exactly one newline.

use std::io::{self, Write};

use patchable::montecarlo::TrialRecord;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // Non-finite floats have no JSON number form.
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(v) => Value::String(v.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
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

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// `trial,n,q,seed,value` followed by `extra_columns`.
    pub fn from_records(records: &[TrialRecord], extra_columns: &[&str]) -> Self {
        let mut table = Self::new(["trial", "n", "q", "seed", "value"].into_iter().chain(extra_columns.iter().copied()));
        for r in records {
            let mut row = vec![
                Cell::Int(r.trial),
                Cell::from(r.n),
                Cell::Float(r.q),
                Cell::Int(r.seed),
                Cell::Float(r.value),
            ];
            row.extend(r.extras.iter().map(|&v| Cell::Float(v)));
            table.push(row);
        }
        table
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.header.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows)?;
                writeln!(out)?;
            }
        }
        out.flush()
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("tables are UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(trial: u64, value: f64) -> TrialRecord {
        TrialRecord {
            trial,
            n: 10,
            q: 1.0,
            seed: 7,
            value,
            extras: vec![value / 3.0],
        }
    }

    #[test]
    fn empty_is_header_only() {
        let t = Table::from_records(&[], &[]);
        assert_eq!(t.to_string(Format::Csv), "trial,n,q,seed,value\n");
        assert_eq!(t.to_string(Format::Json), "[]\n");
    }

    #[test]
    fn three_records_four_lines() {
        let recs: Vec<_> = (0..3).map(|i| record(i, 1.0 + i as f64 / 7.0)).collect();
        let csv = Table::from_records(&recs, &["third"]).to_string(Format::Csv);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.ends_with('\n') && !csv.ends_with("\n\n"));
        assert!(csv.starts_with("trial,n,q,seed,value,third\n0,10,1.0000000000000000e0,7,"));
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1.2020569031595942, 6.02e23, 5e-324, f64::MAX] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        let recs: Vec<_> = (0..5).map(|i| record(i, (i as f64 + 0.1).sqrt())).collect();
        let csv = Table::from_records(&recs, &["third"]).to_string(Format::Csv);
        for (line, r) in csv.lines().skip(1).zip(&recs) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[4].parse::<f64>().unwrap(), r.value);
            assert_eq!(fields[5].parse::<f64>().unwrap(), r.extras[0]);
        }
        let json: Vec<Value> = serde_json::from_str(&Table::from_records(&recs, &["third"]).to_string(Format::Json)).unwrap();
        for (obj, r) in json.iter().zip(&recs) {
            assert_eq!(obj["value"].as_f64().unwrap(), r.value);
            assert_eq!(obj["trial"].as_u64().unwrap(), r.trial);
        }
    }
}
