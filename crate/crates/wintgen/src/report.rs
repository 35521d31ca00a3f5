//! Tabular reports rendered as JSON or CSV.
//!
//! JSON: `{"command": ..., "summary": {...}, "rows": [{column: value}, ...]}`.
//! CSV: a header line followed by the rows; the summary goes to stderr so the
//! CSV stays machine-readable. All values are strings, rationals as `p/q`.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::OutputFormat;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub summary: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: impl Into<String>, columns: &[&'static str]) -> Self {
        Report { command: command.into(), summary: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn summary(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), Value::String(v.clone()))).collect()))
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.clone()));
        top.insert("summary".into(), Value::Object(summary));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn write(&self, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
                for (k, v) in &self.summary {
                    writeln!(err, "{k}: {v}")?;
                }
                Ok(())
            }
        }
    }
}
