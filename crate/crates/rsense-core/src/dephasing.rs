//! The decoherence factor Gamma(t) of the dephasing probe, its split into the
//! constant part Gamma_0 and the oscillatory part Gamma_1(t), the spectral
//! density G(omega), the two-singularity (band-edge) approximation, and all
//! chi-derivatives needed by the Fisher information.
//!
//! Primary path is always the smooth k-space integral
//! Gamma(t) = Q int_0^inf f(k) [1 - cos(omega_k t)] / omega_k^3 dk;
//! the omega-space route through G(omega) is a validation oracle with the
//! band-edge inverse-square-root singularities removed by substitution.

use serde::{Deserialize, Serialize};

use crate::dispersion::{self, RotonFeatures};
use crate::error::{Error, Result};
use crate::numerics::{
    self, gaussian_cutoff, integrate_oscillatory, integrate_oscillatory_finite,
    integrate_semiinfinite, QuadSpec,
};
use crate::parallel::map_slice;
use crate::params::ParamSet;

/// Mode weight f(k) = k^3 exp(-zeta^2 k^2 / 2).
#[inline]
pub fn mode_weight(k: f64, zeta: f64) -> f64 {
    k * k * k * (-0.5 * zeta * zeta * k * k).exp()
}

fn require_stable(set: &ParamSet) -> Result<()> {
    if !set.is_stable() {
        Err(Error::Unstable { k: f64::NAN })
    } else {
        Ok(())
    }
}

fn phase_rate(set: &ParamSet) -> impl Fn(f64) -> f64 + '_ {
    move |k| dispersion::omega_dk(k, set).map(f64::abs).unwrap_or(0.0)
}

/// Time-independent part Gamma_0 = Q int_0^inf f(k)/omega_k^3 dk.
pub fn gamma0(set: &ParamSet) -> Result<f64> {
    require_stable(set)?;
    let r = integrate_semiinfinite(
        |k| {
            let w = dispersion::omega_clamped(k, set);
            mode_weight(k, set.zeta) / (w * w * w)
        },
        1.0 / set.zeta,
        &QuadSpec::default(),
    )?;
    Ok(set.q * r.value)
}

/// Decoherence factor Gamma(t).
pub fn gamma(t: f64, set: &ParamSet) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0 (got {t})")));
    }
    require_stable(set)?;
    let r = integrate_oscillatory(
        |k| {
            let w = dispersion::omega_clamped(k, set);
            let s = (0.5 * w * t).sin();
            mode_weight(k, set.zeta) * 2.0 * s * s / (w * w * w)
        },
        phase_rate(set),
        t,
        1.0 / set.zeta,
        &QuadSpec::default(),
    )?;
    Ok(set.q * r.value)
}

/// Analytic chi-derivative of Gamma(t), differentiated under the integral:
/// Q int f(k) [ t sin(omega t)/omega^3 - 3(1 - cos(omega t))/omega^4 ]
/// d_chi omega dk.
pub fn gamma_dchi(t: f64, set: &ParamSet) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0 (got {t})")));
    }
    require_stable(set)?;
    let p = set.p;
    let r = integrate_oscillatory(
        |k| {
            let w = dispersion::omega_clamped(k, set);
            let dw = p * k * k * ddi(k) / (8.0 * w);
            let s = (0.5 * w * t).sin();
            let bracket = t * (w * t).sin() / (w * w * w) - 6.0 * s * s / (w * w * w * w);
            mode_weight(k, set.zeta) * bracket * dw
        },
        phase_rate(set),
        t,
        1.0 / set.zeta,
        &QuadSpec::default(),
    )?;
    Ok(set.q * r.value)
}

#[inline]
fn ddi(k: f64) -> f64 {
    // k >= 0 inside all integrals
    dispersion::ddi_fourier(k).expect("non-negative wave vector")
}

/// Analytic chi-derivative of Gamma_0: -3 Q int f(k) d_chi omega / omega^4 dk.
pub fn gamma0_dchi(set: &ParamSet) -> Result<f64> {
    require_stable(set)?;
    let p = set.p;
    let r = integrate_semiinfinite(
        |k| {
            let w = dispersion::omega_clamped(k, set);
            let dw = p * k * k * ddi(k) / (8.0 * w);
            mode_weight(k, set.zeta) * dw / (w * w * w * w)
        },
        1.0 / set.zeta,
        &QuadSpec::default(),
    )?;
    Ok(-3.0 * set.q * r.value)
}

/// Spectral density G(omega) = Q sum_i f(k_i)/omega^3 |d omega/dk|^{-1}
/// summed over all dispersion branches through omega.
pub fn spectral_density(omega: f64, set: &ParamSet) -> Result<f64> {
    let features = dispersion::roton_features(set)?;
    spectral_density_with(omega, set, features.as_ref())
}

/// As [`spectral_density`] with precomputed roton features.
pub fn spectral_density_with(
    omega: f64,
    set: &ParamSet,
    features: Option<&RotonFeatures>,
) -> Result<f64> {
    let roots = dispersion::inverse_roots_with(omega, set, features)?;
    let mut sum = 0.0;
    for root in roots {
        let slope = dispersion::omega_dk(root.k, set)?.abs();
        sum += mode_weight(root.k, set.zeta) / (omega * omega * omega * slope);
    }
    Ok(set.q * sum)
}

/// Band-edge weights of the two-singularity approximation
/// G~(omega) = g_roton H(omega - omega_roton)/sqrt(omega - omega_roton)
///           + g_maxon H(omega_maxon - omega)/sqrt(omega_maxon - omega).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralApprox {
    pub omega_roton: f64,
    pub omega_maxon: f64,
    /// weight of the roton edge, units omega_z^{-1/2}
    pub g_roton: f64,
    /// weight of the maxon edge, units omega_z^{-1/2}
    pub g_maxon: f64,
}

/// Computes the singularity weights g_i = Q sqrt(2/|omega''(k_i)|) f(k_i)/omega_i^3
/// from the stationary points.
pub fn singular_approx(set: &ParamSet) -> Result<SpectralApprox> {
    let features = dispersion::roton_features(set)?.ok_or(Error::NoRoton)?;
    let weight = |k: f64, w: f64, curv: f64| {
        set.q * (2.0 / curv.abs()).sqrt() * mode_weight(k, set.zeta) / (w * w * w)
    };
    Ok(SpectralApprox {
        omega_roton: features.omega_roton,
        omega_maxon: features.omega_maxon,
        g_roton: weight(features.k_roton, features.omega_roton, features.curv_roton),
        g_maxon: weight(features.k_maxon, features.omega_maxon, features.curv_maxon),
    })
}

/// Time-dependent part Gamma_1(t) = Gamma(t) - Gamma_0.
pub fn gamma1(t: f64, set: &ParamSet) -> Result<f64> {
    Ok(gamma(t, set)? - gamma0(set)?)
}

/// Cross-check route for Gamma_1: the omega-space integral
/// -int_0^inf G(omega) cos(omega t) d omega, with each band-edge
/// inverse-square-root singularity removed exactly by omega = edge +- u^2.
pub fn gamma1_spectral(t: f64, set: &ParamSet) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be >= 0 (got {t})")));
    }
    require_stable(set)?;
    let features = dispersion::roton_features(set)?;
    let spec = QuadSpec {
        rel_tol: 1e-7,
        abs_tol: 1e-11,
        ..QuadSpec::default()
    };
    let omega_lo = 1e-9;
    let omega_hi = dispersion::omega_clamped(gaussian_cutoff(1.0 / set.zeta), set);
    let g = |omega: f64| {
        spectral_density_with(omega, set, features.as_ref()).expect("interior frequency")
    };

    let mut total = 0.0;
    match &features {
        Some(f) => {
            let mid = 0.5 * (f.omega_roton + f.omega_maxon);
            // below the band: G finite
            total += integrate_oscillatory_finite(
                |w| g(w) * (w * t).cos(),
                |_| 1.0,
                t,
                omega_lo,
                f.omega_roton,
                &spec,
            )?
            .value;
            // roton edge from above: omega = omega_roton + u^2
            let edge_m = f.omega_roton;
            total += integrate_oscillatory_finite(
                |u| {
                    let w = edge_m + u * u;
                    2.0 * u * g(w) * (w * t).cos()
                },
                |u| 2.0 * u.abs(),
                t,
                0.0,
                (mid - edge_m).sqrt(),
                &spec,
            )?
            .value;
            // maxon edge from below: omega = omega_maxon - u^2
            let edge_big = f.omega_maxon;
            total += integrate_oscillatory_finite(
                |u| {
                    let w = edge_big - u * u;
                    2.0 * u * g(w) * (w * t).cos()
                },
                |u| 2.0 * u.abs(),
                t,
                0.0,
                (edge_big - mid).sqrt(),
                &spec,
            )?
            .value;
            // above the band: single free-particle branch
            total += integrate_oscillatory_finite(
                |w| g(w) * (w * t).cos(),
                |_| 1.0,
                t,
                edge_big,
                omega_hi,
                &spec,
            )?
            .value;
        }
        None => {
            total += integrate_oscillatory_finite(
                |w| g(w) * (w * t).cos(),
                |_| 1.0,
                t,
                omega_lo,
                omega_hi,
                &spec,
            )?
            .value;
        }
    }
    Ok(-total)
}

/// Closed-form band-edge approximation of Gamma_1:
/// Gamma~_1(t) = -sqrt(pi/t) [ g_roton cos(omega_roton t + pi/4)
///                           + g_maxon cos(omega_maxon t - pi/4) ].
pub fn gamma1_tilde(t: f64, approx: &SpectralApprox) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Domain(format!(
            "band-edge approximation is singular at t <= 0 (got {t})"
        )));
    }
    let quarter = std::f64::consts::FRAC_PI_4;
    Ok(-(std::f64::consts::PI / t).sqrt()
        * (approx.g_roton * (approx.omega_roton * t + quarter).cos()
            + approx.g_maxon * (approx.omega_maxon * t - quarter).cos()))
}

/// Precomputed Gauss-Kronrod grid for evaluating Gamma, Gamma_1 and the
/// chi-derivatives on many times against one parameter set.
///
/// The panelization satisfies the 1/8-period width law at `t_max`, so every
/// t <= t_max is resolved at least as well as a direct adaptive call; per
/// time point only cos/sin of the cached frequencies remain.
pub struct ModeGrid {
    q: f64,
    nodes: Vec<GridNode>,
}

struct GridNode {
    /// quadrature weight times f(k)
    wf: f64,
    omega: f64,
    domega_dchi: f64,
}

// Kronrod node positions and weights, shared with the adaptive kernel.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

impl ModeGrid {
    pub fn build(set: &ParamSet, t_max: f64) -> Result<Self> {
        if t_max < 0.0 {
            return Err(Error::Domain(format!("t_max must be >= 0 (got {t_max})")));
        }
        require_stable(set)?;
        let k_cut = gaussian_cutoff(1.0 / set.zeta);
        let panels = numerics::oscillatory_panels(
            phase_rate(set),
            t_max,
            0.0,
            k_cut,
            QuadSpec::default().max_panels,
        )?;
        let mut nodes = Vec::with_capacity(panels.len() * 15);
        let mut push = |k: f64, w: f64, set: &ParamSet| {
            let omega = dispersion::omega_clamped(k, set);
            nodes.push(GridNode {
                wf: w * mode_weight(k, set.zeta),
                omega,
                domega_dchi: set.p * k * k * ddi(k) / (8.0 * omega),
            });
        };
        for (a, b) in panels {
            let center = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            for j in 0..7 {
                push(center - half * XGK[j], WGK[j] * half, set);
            }
            push(center, WGK[7] * half, set);
            for j in (0..7).rev() {
                push(center + half * XGK[j], WGK[j] * half, set);
            }
        }
        Ok(ModeGrid { q: set.q, nodes })
    }

    pub fn gamma0(&self) -> f64 {
        let mut sum = 0.0;
        for n in &self.nodes {
            sum += n.wf / (n.omega * n.omega * n.omega);
        }
        self.q * sum
    }

    pub fn gamma0_dchi(&self) -> f64 {
        let mut sum = 0.0;
        for n in &self.nodes {
            let w = n.omega;
            sum += n.wf * n.domega_dchi / (w * w * w * w);
        }
        -3.0 * self.q * sum
    }

    pub fn gamma(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        for n in &self.nodes {
            let w = n.omega;
            let s = (0.5 * w * t).sin();
            sum += n.wf * 2.0 * s * s / (w * w * w);
        }
        self.q * sum
    }

    /// (Gamma(t), d_chi Gamma(t)) in one sweep over the cached nodes.
    pub fn gamma_and_dchi(&self, t: f64) -> (f64, f64) {
        let mut sum = 0.0;
        let mut dsum = 0.0;
        for n in &self.nodes {
            let w = n.omega;
            let (sin_wt, cos_wt) = (w * t).sin_cos();
            let one_minus_cos = 1.0 - cos_wt;
            let w3 = w * w * w;
            sum += n.wf * one_minus_cos / w3;
            dsum += n.wf * n.domega_dchi * (t * sin_wt / w3 - 3.0 * one_minus_cos / (w3 * w));
        }
        (self.q * sum, self.q * dsum)
    }

    pub fn gamma_dchi(&self, t: f64) -> f64 {
        self.gamma_and_dchi(t).1
    }

    /// Gamma over a time grid; data-parallel over the grid points.
    pub fn gamma_curve(&self, ts: &[f64]) -> Vec<f64> {
        map_slice(ts, |&t| self.gamma(t))
    }

    /// (Gamma, d_chi Gamma) over a time grid; data-parallel.
    pub fn gamma_and_dchi_curve(&self, ts: &[f64]) -> Vec<(f64, f64)> {
        map_slice(ts, |&t| self.gamma_and_dchi(t))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}
