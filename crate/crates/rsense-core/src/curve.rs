//! Sampled time curves, the universal output payload.

use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::error::{Error, Result};
use crate::params::ParamSet;

/// A quantity sampled on an ordered time grid (times in 1/omega_z).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Curve {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub params: ParamSet,
    /// quantity label, e.g. "gamma" or "qfi"
    pub label: String,
    /// unit annotation for y
    pub unit: String,
}

/// Formats a float with 17 significant digits, enough to round-trip f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Curve {
    pub fn new(t: Vec<f64>, y: Vec<f64>, params: ParamSet, label: &str, unit: &str) -> Result<Self> {
        if t.len() != y.len() {
            return Err(Error::InvalidParameter(format!(
                "curve length mismatch: {} times vs {} values",
                t.len(),
                y.len()
            )));
        }
        if t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "curve times must be strictly increasing".into(),
            ));
        }
        Ok(Curve {
            t,
            y,
            params,
            label: label.to_string(),
            unit: unit.to_string(),
        })
    }

    /// CSV with header `t,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value")?;
        for (t, y) in self.t.iter().zip(&self.y) {
            writeln!(w, "{},{}", format_float(*t), format_float(*y))?;
        }
        Ok(())
    }

    /// JSON sidecar describing the parameter set and quantity.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "quantity": self.label,
            "unit": self.unit,
            "time_unit": "1/omega_z",
        })
    }
}
