//! Run configuration: one JSON file per invocation (one committed file per
//! reproduced figure), with a few flag overrides applied on top.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use rsense_core::params::{dimensionless_from_physical, PhysicalParams};
use rsense_core::ParamSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn default_schema() -> String {
    "rsense-config/1".to_string()
}

/// Everything a run may need; each command validates the subset it uses.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema: String,
    /// dimensionless model point (alternative: `physical`)
    #[serde(default)]
    pub params: Option<ParamSet>,
    /// physical parameters, converted on load (alternative: `params`)
    #[serde(default)]
    pub physical: Option<PhysicalParams>,
    /// chi scan values for features/envelope/nonmarkov and multi-chi curves
    #[serde(default)]
    pub chi_list: Option<Vec<f64>>,
    /// P values for the critical-point scan
    #[serde(default)]
    pub p_list: Option<Vec<f64>>,
    #[serde(default)]
    pub t_min: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub t_steps: Option<usize>,
    /// base horizon T for the non-Markovianity doubling sequence T, 2T, 4T
    #[serde(default)]
    pub horizon: Option<f64>,
    /// Gamma sampling step for the non-Markovianity run sum
    #[serde(default)]
    pub dt: Option<f64>,
    /// number of locally optimal times to list in the qfi sidecar
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| format!("invalid config: {e}"))?;
        if cfg.schema != "rsense-config/1" {
            return Err(format!("unsupported config schema '{}'", cfg.schema));
        }
        Ok(cfg)
    }

    /// The base model point, from `params` directly or converted from
    /// `physical`. Exactly one of the two must be present.
    pub fn base_params(&self) -> Result<ParamSet, String> {
        match (&self.params, &self.physical) {
            (Some(p), None) => {
                // re-validate through the constructor; serde bypasses it
                ParamSet::new(p.p, p.q, p.zeta, p.chi).map_err(|e| e.to_string())
            }
            (None, Some(phys)) => dimensionless_from_physical(phys).map_err(|e| e.to_string()),
            (Some(_), Some(_)) => Err("give either `params` or `physical`, not both".into()),
            (None, None) => Err("config needs `params` or `physical`".into()),
        }
    }

    /// The chi scan list; defaults to the single base chi.
    pub fn chi_values(&self) -> Result<Vec<f64>, String> {
        match &self.chi_list {
            Some(list) if list.is_empty() => Err("chi_list must be non-empty".into()),
            Some(list) => {
                if list.iter().any(|c| !c.is_finite() || *c < 0.0) {
                    return Err("chi_list entries must be finite and >= 0".into());
                }
                Ok(list.clone())
            }
            None => Ok(vec![self.base_params()?.chi]),
        }
    }

    /// The sampling time grid (t_min defaults to 0).
    pub fn time_grid(&self) -> Result<Vec<f64>, String> {
        let t_min = self.t_min.unwrap_or(0.0);
        let t_max = self.t_max.ok_or("config needs t_max")?;
        let steps = self.t_steps.ok_or("config needs t_steps")?;
        if steps < 2 {
            return Err(format!("t_steps must be >= 2 (got {steps})"));
        }
        if !(t_min >= 0.0) || !(t_max > t_min) {
            return Err(format!("need 0 <= t_min < t_max (got {t_min}, {t_max})"));
        }
        let h = (t_max - t_min) / (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                if i + 1 == steps {
                    t_max
                } else {
                    t_min + h * i as f64
                }
            })
            .collect())
    }
}
