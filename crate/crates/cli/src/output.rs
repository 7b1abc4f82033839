use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Text(String),
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Flag(b) => Value::from(*b),
        }
    }
}

/// Rows under fixed columns, plus optional key/value summary lines.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: Cell) {
        self.summary.push((key.into(), value));
    }

    /// CSV: header and rows, then one `#key,value` line per summary entry.
    /// JSON: an array of row objects, or `{rows, summary}` when a summary exists.
    pub fn render(&self, format: Format) -> io::Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                let mut buf = w.into_inner().map_err(|e| e.into_error())?;
                for (k, v) in &self.summary {
                    writeln!(buf, "#{k},{}", v.csv())?;
                }
                Ok(buf)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = if self.summary.is_empty() {
                    Value::Array(rows)
                } else {
                    let summary: Map<String, Value> =
                        self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
                    let mut top = Map::new();
                    top.insert("rows".into(), Value::Array(rows));
                    top.insert("summary".into(), Value::Object(summary));
                    Value::Object(top)
                };
                let mut buf = serde_json::to_vec_pretty(&doc)?;
                buf.push(b'\n');
                Ok(buf)
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> io::Result<()> {
        let bytes = self.render(format)?;
        match out {
            Some(path) => File::create(path)?.write_all(&bytes),
            None => io::stdout().lock().write_all(&bytes),
        }
    }
}
