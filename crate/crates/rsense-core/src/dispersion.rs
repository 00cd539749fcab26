//! Bogoliubov excitation spectrum of the quasi-2D dipolar condensate:
//! omega_k = (1/2) sqrt(k^4 + P k^2 [1 + chi v_D(k)]), its derivatives,
//! roton/maxon features and the two critical chi values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;
use crate::params::{ParamSet, Stability};
use crate::special::erfcx;

const SQRT_PI_2: f64 = 1.253_314_137_315_500_3; // sqrt(pi/2)

// Stationary-point search grid: log-spaced points on [1e-3, 20]. Roton and
// maxon sit at O(1) wave vectors but extrema are shallow near onset.
const GRID_LO: f64 = 1e-3;
const GRID_HI: f64 = 20.0;
const GRID_N: usize = 2000;

/// Fourier transform of the effective 2D dipole-dipole interaction:
/// v_D(x) = 2 - 3 sqrt(pi/2) x e^{x^2/2} erfc(x/sqrt(2)).
///
/// Evaluated through erfcx so the exponential never overflows. Strictly
/// decreasing from 2 at x = 0 to the asymptote -1.
pub fn ddi_fourier(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!("v_D argument must be >= 0 (got {x})")));
    }
    Ok(ddi_fourier_unchecked(x))
}

#[inline]
fn ddi_fourier_unchecked(x: f64) -> f64 {
    2.0 - 3.0 * SQRT_PI_2 * x * erfcx(x / std::f64::consts::SQRT_2)
}

/// d v_D / dx = 3x - 3 sqrt(pi/2) (1 + x^2) e^{x^2/2} erfc(x/sqrt(2)).
#[inline]
pub fn ddi_fourier_d1(x: f64) -> f64 {
    3.0 * x - 3.0 * SQRT_PI_2 * (1.0 + x * x) * erfcx(x / std::f64::consts::SQRT_2)
}

/// d^2 v_D / dx^2 = 6 + 3x^2 - 3 sqrt(pi/2) x (3 + x^2) e^{x^2/2} erfc(x/sqrt(2)).
#[inline]
pub fn ddi_fourier_d2(x: f64) -> f64 {
    6.0 + 3.0 * x * x - 3.0 * SQRT_PI_2 * x * (3.0 + x * x) * erfcx(x / std::f64::consts::SQRT_2)
}

// Radicand R(k) = k^4 + P k^2 [1 + chi v_D(k)] and its k-derivatives.
#[inline]
fn radicand(k: f64, p: f64, chi: f64) -> f64 {
    k * k * (k * k + p * (1.0 + chi * ddi_fourier_unchecked(k)))
}

#[inline]
fn radicand_d1(k: f64, p: f64, chi: f64) -> f64 {
    4.0 * k * k * k
        + 2.0 * p * k * (1.0 + chi * ddi_fourier_unchecked(k))
        + p * k * k * chi * ddi_fourier_d1(k)
}

#[inline]
fn radicand_d2(k: f64, p: f64, chi: f64) -> f64 {
    12.0 * k * k
        + 2.0 * p * (1.0 + chi * ddi_fourier_unchecked(k))
        + 4.0 * p * k * chi * ddi_fourier_d1(k)
        + p * k * k * chi * ddi_fourier_d2(k)
}

// s(k) = k^2 + P[1 + chi v_D(k)]; the dispersion is real iff min_k s >= 0.
#[inline]
fn stability_fn(k: f64, p: f64, chi: f64) -> f64 {
    k * k + p * (1.0 + chi * ddi_fourier_unchecked(k))
}

fn grid() -> impl Iterator<Item = f64> {
    let ratio = (GRID_HI / GRID_LO).ln() / (GRID_N - 1) as f64;
    (0..GRID_N).map(move |i| GRID_LO * (ratio * i as f64).exp())
}

/// Wave vector minimizing s(k) = k^2 + P[1 + chi v_D(k)].
pub fn radicand_argmin(p: f64, chi: f64) -> f64 {
    let mut best = (f64::INFINITY, GRID_LO);
    for k in grid() {
        let v = stability_fn(k, p, chi);
        if v < best.0 {
            best = (v, k);
        }
    }
    // polish on s'(k) = 2k + P chi v_D'(k) when a bracket exists
    let k0 = best.1;
    let sp = |k: f64| 2.0 * k + p * chi * ddi_fourier_d1(k);
    let (lo, hi) = (k0 * 0.9, k0 * 1.1);
    if sp(lo) < 0.0 && sp(hi) > 0.0 {
        if let Ok(k) = find_root_bracketed(sp, lo, hi, 1e-12) {
            return k;
        }
    }
    k0
}

fn min_stability(p: f64, chi: f64) -> f64 {
    stability_fn(radicand_argmin(p, chi), p, chi)
}

/// Stability classification used by `ParamSet::stability`.
pub(crate) fn classify(p: f64, chi: f64) -> Stability {
    if min_stability(p, chi) < 0.0 {
        Stability::Unstable
    } else if stationary_brackets(p, chi).len() >= 2 {
        Stability::StableRoton
    } else {
        Stability::StableNoRoton
    }
}

/// Excitation frequency omega_k in units of omega_z.
pub fn omega(k: f64, set: &ParamSet) -> Result<f64> {
    if k < 0.0 {
        return Err(Error::Domain(format!("wave vector must be >= 0 (got {k})")));
    }
    let r = radicand(k, set.p, set.chi);
    if r < 0.0 {
        return Err(Error::Unstable { k });
    }
    Ok(0.5 * r.sqrt())
}

// Round-off at a marginally stable point must not poison internal scans.
#[inline]
pub(crate) fn omega_clamped(k: f64, set: &ParamSet) -> f64 {
    0.5 * radicand(k, set.p, set.chi).max(0.0).sqrt()
}

/// d omega / dk, analytic.
pub fn omega_dk(k: f64, set: &ParamSet) -> Result<f64> {
    let w = omega(k, set)?;
    if w == 0.0 {
        return Err(Error::SingularDerivative { k });
    }
    Ok(radicand_d1(k, set.p, set.chi) / (8.0 * w))
}

/// d^2 omega / dk^2, analytic.
pub fn omega_dk2(k: f64, set: &ParamSet) -> Result<f64> {
    let w = omega(k, set)?;
    if w == 0.0 {
        return Err(Error::SingularDerivative { k });
    }
    let r1 = radicand_d1(k, set.p, set.chi);
    let r2 = radicand_d2(k, set.p, set.chi);
    Ok(r2 / (8.0 * w) - r1 * r1 / (64.0 * w * w * w))
}

/// Partial derivative of omega_k with respect to chi at fixed k:
/// P k^2 v_D(k) / (8 omega_k).
pub fn omega_dchi(k: f64, set: &ParamSet) -> Result<f64> {
    let w = omega(k, set)?;
    if w == 0.0 {
        return Err(Error::SingularDerivative { k });
    }
    Ok(set.p * k * k * ddi_fourier_unchecked(k) / (8.0 * w))
}

/// Stationary points of the roton spectrum, with chi-derivatives of both
/// extremal frequencies. The chi-derivative of an extremum equals the fixed-k
/// partial there because d omega/dk = 0 (envelope property).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RotonFeatures {
    /// local maximum (maxon)
    pub k_maxon: f64,
    pub omega_maxon: f64,
    /// second derivative at the maxon, negative
    pub curv_maxon: f64,
    pub domega_maxon_dchi: f64,
    /// local minimum (roton)
    pub k_roton: f64,
    pub omega_roton: f64,
    /// second derivative at the roton, positive
    pub curv_roton: f64,
    pub domega_roton_dchi: f64,
}

/// Sign-change brackets of d omega/dk on the search grid. Works through the
/// radicand derivative, which stays defined even past the instability.
fn stationary_brackets(p: f64, chi: f64) -> Vec<(f64, f64)> {
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in grid() {
        let d = radicand_d1(k, p, chi);
        if let Some((kp, dp)) = prev {
            if dp.signum() != d.signum() && dp != 0.0 {
                brackets.push((kp, k));
            }
        }
        prev = Some((k, d));
    }
    brackets
}

/// Locates the maxon and roton of a stable parameter set. `Ok(None)` means
/// the dispersion is monotone (no roton). Exactly at onset the degenerate
/// inflection is classified as no-roton.
pub fn roton_features(set: &ParamSet) -> Result<Option<RotonFeatures>> {
    if set.stability() == Stability::Unstable {
        return Err(Error::Unstable {
            k: radicand_argmin(set.p, set.chi),
        });
    }
    let brackets = stationary_brackets(set.p, set.chi);
    match brackets.len() {
        0 => Ok(None),
        2 => {
            let refine = |(a, b): (f64, f64)| {
                find_root_bracketed(|k| radicand_d1(k, set.p, set.chi), a, b, 1e-12)
            };
            let k_maxon = refine(brackets[0])?;
            let k_roton = refine(brackets[1])?;
            let curv_maxon = omega_dk2(k_maxon, set)?;
            let curv_roton = omega_dk2(k_roton, set)?;
            if !(k_maxon < k_roton && curv_maxon < 0.0 && curv_roton > 0.0) {
                return Err(Error::ModelAssumption);
            }
            Ok(Some(RotonFeatures {
                k_maxon,
                omega_maxon: omega(k_maxon, set)?,
                curv_maxon,
                domega_maxon_dchi: omega_dchi(k_maxon, set)?,
                k_roton,
                omega_roton: omega(k_roton, set)?,
                curv_roton,
                domega_roton_dchi: omega_dchi(k_roton, set)?,
            }))
        }
        _ => Err(Error::ModelAssumption),
    }
}

fn bracket_chi_upward(mut predicate: impl FnMut(f64) -> bool) -> Result<(f64, f64)> {
    let mut hi = 1.0;
    while !predicate(hi) {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::InvalidParameter(
                "no critical chi found below 1e6".into(),
            ));
        }
    }
    Ok((0.0, hi))
}

fn bisect_chi(mut predicate: impl FnMut(f64) -> bool, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if predicate(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest chi at which the dispersion develops stationary points (roton
/// onset, chi*).
pub fn critical_chi_roton(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("P must be positive (got {p})")));
    }
    let pred = |chi: f64| stationary_brackets(p, chi).len() >= 2;
    let (lo, hi) = bracket_chi_upward(pred)?;
    Ok(bisect_chi(pred, lo, hi, 1e-6))
}

/// Smallest chi at which min_k (k^2 + P[1 + chi v_D(k)]) reaches zero and the
/// condensate turns unstable (chi**).
pub fn critical_chi_instability(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("P must be positive (got {p})")));
    }
    let pred = |chi: f64| min_stability(p, chi) < 0.0;
    let (lo, hi) = bracket_chi_upward(pred)?;
    // tight tolerance: omega at the roton scales like sqrt(chi** - chi)
    Ok(bisect_chi(pred, lo, hi, 1e-9))
}

/// Spectrum branch a root of omega_k = omega belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// rising branch below the maxon
    Phonon,
    /// falling branch between maxon and roton
    Backbend,
    /// rising branch above the roton
    FreeParticle,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InverseRoot {
    pub k: f64,
    pub branch: Branch,
}

/// All positive solutions of omega_k = omega, with branch labels.
///
/// Roton-regime parameters yield one root outside the (omega_roton,
/// omega_maxon) band and three inside it; a monotone dispersion always
/// yields one. Band-edge frequencies are rejected: the density of states
/// diverges there and the caller must use the singular approximation.
pub fn inverse_roots(target: f64, set: &ParamSet) -> Result<Vec<InverseRoot>> {
    let features = roton_features(set)?;
    inverse_roots_with(target, set, features.as_ref())
}

/// As [`inverse_roots`], reusing precomputed roton features. Callers that
/// evaluate the spectral density on a dense omega grid avoid re-running the
/// stationary-point search on every call.
pub fn inverse_roots_with(
    target: f64,
    set: &ParamSet,
    features: Option<&RotonFeatures>,
) -> Result<Vec<InverseRoot>> {
    if !(target > 0.0) {
        return Err(Error::Domain(format!("omega must be positive (got {target})")));
    }
    let g = |k: f64| omega_clamped(k, set) - target;

    // upper bracket on the free-particle tail
    let mut k_hi = match &features {
        Some(f) => f.k_roton.max(1.0),
        None => 1.0,
    };
    let mut guard = 0;
    while omega_clamped(k_hi, set) <= target {
        k_hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::Domain(format!("no k with omega_k > {target}")));
        }
    }

    let refine = |a: f64, b: f64, branch: Branch| -> Result<InverseRoot> {
        let k = find_root_bracketed(g, a, b, 1e-12)?;
        Ok(InverseRoot { k, branch })
    };

    match features {
        Some(f) => {
            let edge = |x: f64, e: f64| (x - e).abs() <= 1e-12 * e.abs().max(1.0);
            if edge(target, f.omega_roton) || edge(target, f.omega_maxon) {
                return Err(Error::BandEdge { omega: target });
            }
            if target < f.omega_roton {
                Ok(vec![refine(0.0, f.k_maxon, Branch::Phonon)?])
            } else if target > f.omega_maxon {
                Ok(vec![refine(f.k_roton, k_hi, Branch::FreeParticle)?])
            } else {
                Ok(vec![
                    refine(0.0, f.k_maxon, Branch::Phonon)?,
                    refine(f.k_maxon, f.k_roton, Branch::Backbend)?,
                    refine(f.k_roton, k_hi, Branch::FreeParticle)?,
                ])
            }
        }
        None => Ok(vec![refine(0.0, k_hi, Branch::Phonon)?]),
    }
}
