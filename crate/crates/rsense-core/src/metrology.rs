//! Fisher information of the dephasing probe for estimating the relative
//! dipolar interaction strength chi, the long-time envelope built from the
//! band-edge weights, and the BLP non-Markovianity of the reduced dynamics.

use serde::{Deserialize, Serialize};

use crate::dephasing::{self, ModeGrid};
use crate::dispersion;
use crate::error::{Error, Result};
use crate::params::ParamSet;

/// Quantum Fisher information of the dephased probe,
/// F_Q = (d_chi Gamma)^2 / (e^{2 Gamma} - 1).
///
/// At t = 0 both Gamma and its derivative vanish quadratically faster than
/// the denominator, so the limit is 0.
pub fn qfi(gamma: f64, gamma_dchi: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    gamma_dchi * gamma_dchi / (2.0 * gamma).exp_m1()
}

/// Classical Fisher information of a sigma_x measurement,
/// F_x = (d_chi Gamma)^2 e^{-2 Gamma} / (1 - e^{-2 Gamma}).
///
/// Algebraically identical to [`qfi`]; kept separate so the optimality of the
/// measurement is an executable statement rather than a comment.
pub fn fisher_sigma_x(gamma: f64, gamma_dchi: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    // 1 - e^{-2G} via expm1 so tiny Gamma keeps full relative precision
    gamma_dchi * gamma_dchi * (-2.0 * gamma).exp() / (-(-2.0 * gamma).exp_m1())
}

/// Coefficients of the long-time QFI envelope
/// F~(t) = A t sin^2(omega_roton t + pi/4) - B sqrt(t) sin(omega_roton t + pi/4) + C.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnvelopeCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub omega_roton: f64,
}

/// Builds the envelope coefficients from the band-edge data:
/// with a_r = g_roton d_chi omega_roton,
/// A = pi a_r^2 / (e^{2 Gamma_0} - 1),
/// B = 2 sqrt(pi) a_r d_chi Gamma_0 / (1 - e^{2 Gamma_0}),
/// C = (d_chi Gamma_0)^2 / (e^{2 Gamma_0} - 1).
/// The discriminant identity B^2 = 4 A C holds by construction.
pub fn envelope_coefficients(set: &ParamSet) -> Result<EnvelopeCoefficients> {
    let features = dispersion::roton_features(set)?.ok_or(Error::NoRoton)?;
    let approx = dephasing::singular_approx(set)?;
    let gamma0 = dephasing::gamma0(set)?;
    let dgamma0 = dephasing::gamma0_dchi(set)?;
    let a_r = approx.g_roton * features.domega_roton_dchi;
    let denom = (2.0 * gamma0).exp_m1();
    Ok(EnvelopeCoefficients {
        a: std::f64::consts::PI * a_r * a_r / denom,
        b: -2.0 * std::f64::consts::PI.sqrt() * a_r * dgamma0 / denom,
        c: dgamma0 * dgamma0 / denom,
        omega_roton: features.omega_roton,
    })
}

/// The envelope F~(t) evaluated at time t > 0.
pub fn qfi_tilde(t: f64, env: &EnvelopeCoefficients) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Domain(format!(
            "envelope is a long-time form, needs t > 0 (got {t})"
        )));
    }
    let s = (env.omega_roton * t + std::f64::consts::FRAC_PI_4).sin();
    Ok(env.a * t * s * s - env.b * t.sqrt() * s + env.c)
}

/// Locally optimal interrogation times t_n = (2n + 5/4) pi / omega_roton for
/// n = 0, 1, ..., up to and including the first one at or beyond `t_max`.
pub fn local_optimal_times(omega_roton: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(omega_roton > 0.0) {
        return Err(Error::Domain(format!(
            "roton frequency must be positive (got {omega_roton})"
        )));
    }
    if t_max <= 0.0 {
        return Err(Error::Domain(format!("t_max must be > 0 (got {t_max})")));
    }
    let mut out = Vec::new();
    let mut n = 0u32;
    loop {
        let t = (2.0 * f64::from(n) + 1.25) * std::f64::consts::PI / omega_roton;
        out.push(t);
        if t >= t_max {
            break;
        }
        n += 1;
    }
    Ok(out)
}

/// BLP non-Markovianity of the dephasing channel on [0, t_max]:
/// the sum of e^{-Gamma} increases over every interval where Gamma decreases,
/// N = sum_runs [ e^{-Gamma(t_end)} - e^{-Gamma(t_start)} ].
///
/// Gamma is sampled with step `dt`; in the roton regime the step must resolve
/// the band-edge oscillation, dt <= pi / (4 omega_roton), otherwise runs of
/// decreasing Gamma are missed and the estimate is rejected.
pub fn non_markovianity(set: &ParamSet, t_max: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) || !(t_max > 0.0) || dt > t_max {
        return Err(Error::Domain(format!(
            "need 0 < dt <= t_max (got dt = {dt}, t_max = {t_max})"
        )));
    }
    if let Some(f) = dispersion::roton_features(set)? {
        let max_dt = std::f64::consts::FRAC_PI_4 / f.omega_roton;
        if dt > max_dt {
            return Err(Error::Resolution { dt, max_dt });
        }
    }
    let n = (t_max / dt).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| (i as f64) * dt).collect();
    let grid = ModeGrid::build(set, *ts.last().unwrap())?;
    let gammas = grid.gamma_curve(&ts);
    Ok(non_markovianity_from_samples(&gammas))
}

/// Run-sum over precomputed Gamma samples on a uniform grid; split out as a
/// deterministic kernel the tests can drive with synthetic data.
pub fn non_markovianity_from_samples(gammas: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut run_start: Option<f64> = None;
    for w in gammas.windows(2) {
        if w[1] < w[0] {
            if run_start.is_none() {
                run_start = Some(w[0]);
            }
            // keep extending the run
        } else if let Some(g0) = run_start.take() {
            total += (-w[0]).exp() - (-g0).exp();
        }
    }
    if let Some(g0) = run_start {
        total += (-gammas[gammas.len() - 1]).exp() - (-g0).exp();
    }
    total
}
