//! One function per subcommand; each turns a validated config into a Table.
//!
//! Scan points are dispatched through the core's data-parallel map and
//! collected in input order, so output is deterministic regardless of how the
//! pool schedules them.

use serde_json::json;

use rsense_core::dephasing::{self, ModeGrid};
use rsense_core::dispersion;
use rsense_core::metrology;
use rsense_core::parallel::map_slice;
use rsense_core::params::{dimensionless_from_physical, excited_level_shift, Stability};
use rsense_core::ParamSet;

use crate::config::RunConfig;
use crate::output::{opt, Cell, Table};
use crate::CliError;

type Rows = Vec<Vec<Cell>>;

fn stability_label(s: Stability) -> &'static str {
    match s {
        Stability::StableNoRoton => "stable-no-roton",
        Stability::StableRoton => "stable-roton",
        Stability::Unstable => "unstable",
    }
}

fn meta(cfg: &RunConfig) -> serde_json::Value {
    json!({ "config": cfg })
}

/// Collects per-scan-point row groups, stopping at the first numeric failure.
fn gather(results: Vec<Result<Rows, CliError>>) -> Result<Rows, CliError> {
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn features(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params().map_err(CliError::Config)?;
    let chis = cfg.chi_values().map_err(CliError::Config)?;
    let results = map_slice(&chis, |&chi| -> Result<Rows, CliError> {
        let stability = ParamSet { chi, ..base }.stability();
        if stability == Stability::Unstable {
            return Ok(vec![vec![
                Cell::Float(chi),
                "unstable".into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]]);
        }
        let set = ParamSet { chi, ..base };
        let features = dispersion::roton_features(&set).map_err(CliError::numeric)?;
        let row = match features {
            None => vec![
                Cell::Float(chi),
                stability_label(stability).into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ],
            Some(f) => {
                let approx = dephasing::singular_approx(&set).map_err(CliError::numeric)?;
                vec![
                    Cell::Float(chi),
                    stability_label(stability).into(),
                    f.k_maxon.into(),
                    f.omega_maxon.into(),
                    f.k_roton.into(),
                    f.omega_roton.into(),
                    approx.g_maxon.into(),
                    approx.g_roton.into(),
                ]
            }
        };
        Ok(vec![row])
    });
    Ok(Table {
        schema: "rsense.features.v1",
        columns: vec![
            "chi", "stability", "k_maxon", "omega_maxon", "k_roton", "omega_roton", "g_maxon",
            "g_roton",
        ],
        rows: gather(results)?,
        units: json!({
            "k_maxon": "1/l_B", "k_roton": "1/l_B",
            "omega_maxon": "omega_z", "omega_roton": "omega_z",
            "g_maxon": "omega_z^-1/2", "g_roton": "omega_z^-1/2",
        }),
        meta: meta(cfg),
    })
}

fn stable_set(base: &ParamSet, chi: f64) -> Result<ParamSet, CliError> {
    ParamSet::new(base.p, base.q, base.zeta, chi).map_err(CliError::numeric)
}

pub fn gamma(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params().map_err(CliError::Config)?;
    let chis = cfg.chi_values().map_err(CliError::Config)?;
    let ts = cfg.time_grid().map_err(CliError::Config)?;
    let t_max = *ts.last().unwrap();

    let mut rows = Vec::with_capacity(chis.len() * ts.len());
    for &chi in &chis {
        let set = stable_set(&base, chi)?;
        let grid = ModeGrid::build(&set, t_max).map_err(CliError::numeric)?;
        let gamma0 = grid.gamma0();
        let approx = match set.stability() {
            Stability::StableRoton => {
                Some(dephasing::singular_approx(&set).map_err(CliError::numeric)?)
            }
            _ => None,
        };
        let gammas = grid.gamma_curve(&ts);
        for (&t, &g) in ts.iter().zip(&gammas) {
            let tilde = approx
                .as_ref()
                .filter(|_| t > 0.0)
                .map(|a| dephasing::gamma1_tilde(t, a).expect("t > 0"));
            rows.push(vec![
                Cell::Float(chi),
                t.into(),
                g.into(),
                (g - gamma0).into(),
                opt(tilde),
            ]);
        }
    }
    Ok(Table {
        schema: "rsense.gamma.v1",
        columns: vec!["chi", "t", "gamma", "gamma1", "gamma1_tilde"],
        rows,
        units: json!({ "t": "1/omega_z", "gamma": "1", "gamma1": "1", "gamma1_tilde": "1" }),
        meta: meta(cfg),
    })
}

pub fn qfi(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params().map_err(CliError::Config)?;
    let chis = cfg.chi_values().map_err(CliError::Config)?;
    let ts = cfg.time_grid().map_err(CliError::Config)?;
    let t_max = *ts.last().unwrap();
    let n_max = cfg.n_max.unwrap_or(8);

    let mut rows = Vec::with_capacity(chis.len() * ts.len());
    let mut envelopes = serde_json::Map::new();
    for &chi in &chis {
        let set = stable_set(&base, chi)?;
        let grid = ModeGrid::build(&set, t_max).map_err(CliError::numeric)?;
        let env = match set.stability() {
            Stability::StableRoton => {
                Some(metrology::envelope_coefficients(&set).map_err(CliError::numeric)?)
            }
            _ => None,
        };
        if let Some(e) = &env {
            let t_lo: Vec<f64> = metrology::local_optimal_times(e.omega_roton, t_max)
                .map_err(CliError::numeric)?
                .into_iter()
                .take(n_max)
                .collect();
            envelopes.insert(
                format!("{chi}"),
                json!({ "coefficients": e, "local_optimal_times": t_lo }),
            );
        }
        for (&t, &(g, dg)) in ts.iter().zip(&grid.gamma_and_dchi_curve(&ts)) {
            let f = metrology::qfi(g, dg);
            let (tilde, envelope) = match (&env, t > 0.0) {
                (Some(e), true) => (
                    Some(metrology::qfi_tilde(t, e).expect("t > 0")),
                    Some(e.a * t + e.b * t.sqrt() + e.c),
                ),
                _ => (None, None),
            };
            rows.push(vec![
                Cell::Float(chi),
                t.into(),
                f.into(),
                opt(tilde),
                opt(envelope),
            ]);
        }
    }
    let mut meta = meta(cfg);
    meta["envelopes"] = serde_json::Value::Object(envelopes);
    Ok(Table {
        schema: "rsense.qfi.v1",
        columns: vec!["chi", "t", "qfi", "qfi_tilde", "envelope"],
        rows,
        units: json!({ "t": "1/omega_z", "qfi": "1", "qfi_tilde": "1", "envelope": "1" }),
        meta,
    })
}

pub fn envelope(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params().map_err(CliError::Config)?;
    let chis = cfg.chi_values().map_err(CliError::Config)?;
    let results = map_slice(&chis, |&chi| -> Result<Rows, CliError> {
        if (ParamSet { chi, ..base }).stability() == Stability::Unstable {
            return Ok(vec![vec![
                Cell::Float(chi),
                "unstable".into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]]);
        }
        let set = ParamSet { chi, ..base };
        let gamma0 = dephasing::gamma0(&set).map_err(CliError::numeric)?;
        let gamma0_dchi = dephasing::gamma0_dchi(&set).map_err(CliError::numeric)?;
        let features = dispersion::roton_features(&set).map_err(CliError::numeric)?;
        let row = match features {
            None => vec![
                Cell::Float(chi),
                "no-roton".into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                gamma0.into(),
                gamma0_dchi.into(),
            ],
            Some(f) => {
                let approx = dephasing::singular_approx(&set).map_err(CliError::numeric)?;
                let env = metrology::envelope_coefficients(&set).map_err(CliError::numeric)?;
                vec![
                    Cell::Float(chi),
                    "ok".into(),
                    env.a.into(),
                    env.b.into(),
                    env.c.into(),
                    (approx.g_roton * f.domega_roton_dchi).into(),
                    (approx.g_maxon * f.domega_maxon_dchi).into(),
                    gamma0.into(),
                    gamma0_dchi.into(),
                ]
            }
        };
        Ok(vec![row])
    });
    Ok(Table {
        schema: "rsense.envelope.v1",
        columns: vec![
            "chi", "status", "A", "B", "C", "a_roton", "a_maxon", "gamma0", "gamma0_dchi",
        ],
        rows: gather(results)?,
        units: json!({
            "A": "omega_z", "B": "omega_z^1/2", "C": "1",
            "a_roton": "omega_z^1/2", "a_maxon": "omega_z^1/2",
            "gamma0": "1", "gamma0_dchi": "1",
        }),
        meta: meta(cfg),
    })
}

pub fn critical(cfg: &RunConfig) -> Result<Table, CliError> {
    let ps = match &cfg.p_list {
        Some(list) if !list.is_empty() => list.clone(),
        _ => return Err(CliError::Config("config needs a non-empty p_list".into())),
    };
    if ps.iter().any(|p| !(*p > 0.0)) {
        return Err(CliError::Config("p_list entries must be positive".into()));
    }
    let results = map_slice(&ps, |&p| -> Result<Rows, CliError> {
        let chi_roton = dispersion::critical_chi_roton(p).map_err(CliError::numeric)?;
        let chi_collapse = dispersion::critical_chi_instability(p).map_err(CliError::numeric)?;
        Ok(vec![vec![
            Cell::Float(p),
            chi_roton.into(),
            chi_collapse.into(),
        ]])
    });
    Ok(Table {
        schema: "rsense.critical.v1",
        columns: vec!["P", "chi_roton", "chi_instability"],
        rows: gather(results)?,
        units: json!({ "P": "1", "chi_roton": "1", "chi_instability": "1" }),
        meta: meta(cfg),
    })
}

pub fn nonmarkov(cfg: &RunConfig) -> Result<Table, CliError> {
    let base = cfg.base_params().map_err(CliError::Config)?;
    let chis = cfg.chi_values().map_err(CliError::Config)?;
    let horizon = cfg
        .horizon
        .filter(|h| *h > 0.0)
        .ok_or_else(|| CliError::Config("config needs a positive horizon".into()))?;
    let dt = cfg
        .dt
        .filter(|dt| *dt > 0.0)
        .ok_or_else(|| CliError::Config("config needs a positive dt".into()))?;

    let mut rows = Vec::new();
    for &chi in &chis {
        let set = stable_set(&base, chi)?;
        for factor in [1.0, 2.0, 4.0] {
            let t = factor * horizon;
            let n = metrology::non_markovianity(&set, t, dt).map_err(CliError::numeric)?;
            rows.push(vec![Cell::Float(chi), t.into(), n.into()]);
        }
    }
    Ok(Table {
        schema: "rsense.nonmarkov.v1",
        columns: vec!["chi", "horizon", "nonmarkovianity"],
        rows,
        units: json!({ "horizon": "1/omega_z", "nonmarkovianity": "1" }),
        meta: meta(cfg),
    })
}

pub fn convert(cfg: &RunConfig) -> Result<Table, CliError> {
    let phys = cfg
        .physical
        .as_ref()
        .ok_or_else(|| CliError::Config("convert needs `physical` parameters".into()))?;
    let set = dimensionless_from_physical(phys).map_err(|e| CliError::Config(e.to_string()))?;
    let shift = excited_level_shift(phys).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Table {
        schema: "rsense.convert.v1",
        columns: vec![
            "P",
            "Q",
            "zeta",
            "chi",
            "l_a",
            "l_b",
            "excited_level_shift",
        ],
        rows: vec![vec![
            set.p.into(),
            set.q.into(),
            set.zeta.into(),
            set.chi.into(),
            phys.l_a().into(),
            phys.l_b().into(),
            shift.into(),
        ]],
        units: json!({
            "l_a": "m", "l_b": "m", "excited_level_shift": "omega_z",
        }),
        meta: meta(cfg),
    })
}
