//! Tabular output shared by all subcommands: CSV with 17-significant-digit
//! floats, JSON with embedded metadata, and a JSON metadata sidecar for CSV.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

/// A single table cell. `Empty` renders as an empty CSV field / JSON null,
/// used for columns that do not apply to a row (e.g. roton data without a
/// roton).
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

pub fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Empty, Cell::Float)
}

/// Formats a float with 17 significant digits (round-trips any f64).
fn fmt(v: f64) -> String {
    rsense_core::curve::format_float(v)
}

pub struct Table {
    /// versioned schema identifier, e.g. "rsense.features.v1"
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// unit annotations per column (omega_z conventions)
    pub units: Value,
    /// echo of the parameters the table was computed from
    pub meta: Value,
}

impl Table {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Float(v) => fmt(*v),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn metadata(&self) -> Value {
        json!({
            "schema": self.schema,
            "columns": self.columns,
            "units": self.units,
            "params": self.meta,
            "time_unit": "1/omega_z",
        })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| {
                        let v = match cell {
                            Cell::Float(x) => json!(x),
                            Cell::Text(s) => json!(s),
                            Cell::Empty => Value::Null,
                        };
                        (name.to_string(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = self.metadata();
        doc["rows"] = Value::Array(rows);
        writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)
    }

    /// Path of the metadata sidecar written next to a CSV output.
    pub fn sidecar_path(out: &Path) -> PathBuf {
        let mut name = out.file_name().unwrap_or_default().to_os_string();
        name.push(".meta.json");
        out.with_file_name(name)
    }

    pub fn write_sidecar(&self, out: &Path) -> std::io::Result<()> {
        let path = Self::sidecar_path(out);
        std::fs::write(path, serde_json::to_string_pretty(&self.metadata())?)
    }
}
