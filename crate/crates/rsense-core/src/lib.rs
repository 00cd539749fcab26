//! Simulation of an impurity qubit dephasing in a quasi-2D dipolar BEC and the
//! precision of estimating the relative dipole-dipole interaction strength chi
//! from that dephasing.
//!
//! Units follow the quasi-2D convention throughout: frequencies in `omega_z`,
//! wave vectors in `1/l_B`, times in `1/omega_z`. All model inputs are collapsed
//! into the four dimensionless numbers of [`params::ParamSet`].

pub mod curve;
pub mod dephasing;
pub mod dispersion;
pub mod error;
pub mod metrology;
pub mod numerics;
pub mod params;
pub mod parallel;
pub mod special;

pub use curve::Curve;
pub use error::{Error, Result};
pub use params::{ParamSet, PhysicalParams, Stability};
