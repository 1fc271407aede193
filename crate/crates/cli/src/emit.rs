//! Rendering of command results as JSON or CSV.
//!
//! JSON goes through `serde_json::Value`, whose object map is ordered, so
//! keys come out sorted. CSV uses an explicit column list per table; a
//! result without a table is flattened to one row with dotted keys
//! (`summary.delta_over_q.min`, `modulus.0`).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

/// Rows with a fixed column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Builds a table from serializable rows, pulling `columns` out of each
    /// row's fields.
    pub fn from_rows<S: Serialize>(columns: &[&str], rows: &[S]) -> anyhow::Result<Table> {
        let rows = rows
            .iter()
            .map(|r| {
                let v = serde_json::to_value(r)?;
                Ok(columns
                    .iter()
                    .map(|c| cell(v.get(*c).unwrap_or(&Value::Null)))
                    .collect())
            })
            .collect::<anyhow::Result<Vec<Vec<String>>>>()?;
        Ok(Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        })
    }

    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }
}

/// A command result: the structured record and, optionally, its tabular
/// form for CSV output.
#[derive(Clone, Debug)]
pub struct Emission {
    pub record: Value,
    pub table: Option<Table>,
}

impl Emission {
    pub fn record<S: Serialize>(record: &S) -> anyhow::Result<Self> {
        Ok(Emission {
            record: serde_json::to_value(record)?,
            table: None,
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        match format {
            Format::Json => json_bytes(&self.record),
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => flat_table(&self.record).to_csv(),
            },
        }
    }
}

pub fn json_bytes(value: &Value) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => serde_json::to_string(v).unwrap_or_default(),
    }
}

/// Leaf values of `value` keyed by their dotted path.
pub fn flatten(value: &Value) -> BTreeMap<String, String> {
    fn walk(v: &Value, prefix: &str, out: &mut BTreeMap<String, String>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| walk(x, &join(k), out)),
            Value::Array(a) if !a.is_empty() => a
                .iter()
                .enumerate()
                .for_each(|(i, x)| walk(x, &join(&i.to_string()), out)),
            _ => {
                out.insert(prefix.to_string(), cell(v));
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(value, "", &mut out);
    out
}

/// One-row table of the flattened record. Dotted keys sort
/// lexicographically, so `rows.10` precedes `rows.2`.
pub fn flat_table(value: &Value) -> Table {
    let flat = flatten(value);
    Table {
        columns: flat.keys().cloned().collect(),
        rows: vec![flat.into_values().collect()],
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
