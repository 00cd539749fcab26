//! The dimensionless model point (P, Q, zeta, chi) and its construction from
//! physical atom/trap parameters.

use serde::{Deserialize, Serialize};

use crate::dispersion;
use crate::error::{Error, Result};

pub const HBAR: f64 = 1.054_571_817e-34; // J s
pub const MU_0: f64 = 1.256_637_062_12e-6; // N A^-2

/// Dimensionless model point. Every physics operation is a function of it.
///
/// * `p`    - interaction parameter, P = 8 sqrt(2 pi) l_B a_B n
/// * `q`    - qubit-reservoir coupling strength
/// * `zeta` - trap-width ratio l_A / l_B
/// * `chi`  - relative dipole-dipole interaction strength g_D / g_B, the estimand
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub zeta: f64,
    pub chi: f64,
}

/// Stability classification of a model point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    StableNoRoton,
    StableRoton,
    Unstable,
}

impl ParamSet {
    /// Validated constructor: positive P, Q, zeta, non-negative chi, and a
    /// real dispersion (min_k k^2 + P[1 + chi v_D(k)] >= 0).
    pub fn new(p: f64, q: f64, zeta: f64, chi: f64) -> Result<Self> {
        if !(p > 0.0) || !(q > 0.0) || !(zeta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "P, Q, zeta must be positive (got P={p}, Q={q}, zeta={zeta})"
            )));
        }
        if !(chi >= 0.0) {
            return Err(Error::InvalidParameter(format!("chi must be >= 0 (got {chi})")));
        }
        let set = ParamSet { p, q, zeta, chi };
        if set.stability() == Stability::Unstable {
            return Err(Error::Unstable {
                k: dispersion::radicand_argmin(p, chi),
            });
        }
        Ok(set)
    }

    /// Classifies the point as stable without roton, stable with roton, or
    /// unstable. Never fails: an unstable point is a classification result.
    pub fn stability(&self) -> Stability {
        dispersion::classify(self.p, self.chi)
    }

    pub fn is_stable(&self) -> bool {
        self.stability() != Stability::Unstable
    }
}

/// Physical atom and trap parameters in SI units. `chi` may be given directly
/// (the usual case: chi is the estimand) or derived from a magnetic dipole
/// moment `mu_m`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// impurity mass (kg)
    pub m_a: f64,
    /// reservoir atom mass (kg)
    pub m_b: f64,
    /// impurity trap frequency (rad/s)
    pub omega_a: f64,
    /// reservoir transverse trap frequency (rad/s)
    pub omega_z: f64,
    /// reservoir s-wave scattering length (m)
    pub a_b: f64,
    /// impurity-reservoir scattering length (m)
    pub a_ab: f64,
    /// condensate area density (m^-2)
    pub n: f64,
    /// relative DDI strength, if given directly
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    /// magnetic dipole moment (A m^2), used when chi is not given
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_m: Option<f64>,
}

impl PhysicalParams {
    fn check(&self) -> Result<()> {
        let fields = [
            ("m_a", self.m_a),
            ("m_b", self.m_b),
            ("omega_a", self.omega_a),
            ("omega_z", self.omega_z),
            ("a_b", self.a_b),
            ("a_ab", self.a_ab),
            ("n", self.n),
        ];
        for (name, v) in fields {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive (got {v})")));
            }
        }
        match (self.chi, self.mu_m) {
            (Some(c), _) if c < 0.0 => {
                Err(Error::InvalidParameter(format!("chi must be >= 0 (got {c})")))
            }
            (None, Some(m)) if m <= 0.0 => {
                Err(Error::InvalidParameter(format!("mu_m must be positive (got {m})")))
            }
            (None, None) => Err(Error::InvalidParameter(
                "either chi or mu_m must be given".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Transverse oscillator width of the reservoir, l_B = sqrt(hbar/(m_B omega_z)).
    pub fn l_b(&self) -> f64 {
        (HBAR / (self.m_b * self.omega_z)).sqrt()
    }

    /// Oscillator width of the impurity trap, l_A = sqrt(hbar/(m_A omega_A)).
    pub fn l_a(&self) -> f64 {
        (HBAR / (self.m_a * self.omega_a)).sqrt()
    }

    fn chi_value(&self) -> f64 {
        match self.chi {
            Some(c) => c,
            // chi = g_D/g_B with g_D = mu_0 mu_m^2/3 and g_B = 4 pi hbar^2 a_B/m_B
            None => {
                let mu_m = self.mu_m.expect("checked");
                MU_0 * mu_m * mu_m * self.m_b / (12.0 * std::f64::consts::PI * HBAR * HBAR * self.a_b)
            }
        }
    }
}

/// Collapses physical parameters into the dimensionless model point.
pub fn dimensionless_from_physical(phys: &PhysicalParams) -> Result<ParamSet> {
    phys.check()?;
    let l_a = phys.l_a();
    let l_b = phys.l_b();
    let p = 8.0 * (2.0 * std::f64::consts::PI).sqrt() * l_b * phys.a_b * phys.n;
    let mass_ratio = (phys.m_a + phys.m_b) / phys.m_a;
    let q = phys.n * phys.a_ab * phys.a_ab * l_b * l_b * mass_ratio * mass_ratio
        / (l_a * l_a + l_b * l_b);
    ParamSet::new(p, q, l_a / l_b, phys.chi_value())
}

/// Collisional shift of the excited level, in units of omega_z:
/// delta_e = 2 sqrt(pi) n a_AB m_B l_B^2 / [m_AB (l_A^2 + l_B^2)^(1/2)].
///
/// Computed for completeness; the dimensionless pipeline absorbs it into Q
/// and never consumes it.
pub fn excited_level_shift(phys: &PhysicalParams) -> Result<f64> {
    phys.check()?;
    let l_a = phys.l_a();
    let l_b = phys.l_b();
    let m_ab = phys.m_a * phys.m_b / (phys.m_a + phys.m_b);
    Ok(2.0 * std::f64::consts::PI.sqrt() * phys.n * phys.a_ab * phys.m_b * l_b * l_b
        / (m_ab * (l_a * l_a + l_b * l_b).sqrt()))
}
