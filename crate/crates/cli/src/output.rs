//! Tabular output as CSV (with a config comment line) or one JSON document.

use std::io::Write;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::CliError;

/// Rows of string cells under a fixed header, plus failure messages.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Key/value pairs about the whole table, such as a cardinality.
    pub summary: Vec<(String, String)>,
    pub failures: Vec<String>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|h| h.as_ref().to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.summary.push((key.into(), value.into()));
    }
}

/// Formats a float for output cells.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.12e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn cell_value(s: &str) -> Value {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && !s.is_empty() && !s.contains(',') => {
            serde_json::Number::from_f64(v).map_or(Value::String(s.into()), Value::Number)
        }
        _ => Value::String(s.into()),
    }
}

/// Renders the table with the run configuration embedded.
pub fn render(table: &Table, config: &Value, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            writeln!(out, "# config {config}").map_err(CliError::io)?;
            for (k, v) in &table.summary {
                writeln!(out, "# {k} {v}").map_err(CliError::io)?;
            }
            for f in &table.failures {
                writeln!(out, "# failure {f}").map_err(CliError::io)?;
            }
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&table.header).map_err(CliError::io)?;
                for row in &table.rows {
                    w.write_record(row).map_err(CliError::io)?;
                }
                w.flush().map_err(CliError::io)?;
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (h, c) in table.header.iter().zip(row) {
                        obj.insert(h.clone(), cell_value(c));
                    }
                    Value::Object(obj)
                })
                .collect();
            let summary: Map<String, Value> = table.summary.iter().map(|(k, v)| (k.clone(), cell_value(v))).collect();
            let doc = serde_json::json!({ "config": config, "summary": summary, "rows": rows, "failures": table.failures });
            let mut out = serde_json::to_vec_pretty(&doc).map_err(CliError::io)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}
