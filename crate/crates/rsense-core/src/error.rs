use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative dispersion radicand at k = {k}: the condensate is unstable for this parameter set")]
    Unstable { k: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("derivative is singular at k = {k} (omega_k = 0)")]
    SingularDerivative { k: f64 },

    #[error("no sign change on bracket [{a}, {b}]")]
    NoBracket { a: f64, b: f64 },

    #[error("quadrature failed to converge within {max_panels} panels (worst panel [{a}, {b}], error {err:.3e}); consider raising max_panels")]
    QuadratureFailure {
        max_panels: usize,
        a: f64,
        b: f64,
        err: f64,
    },

    #[error("more than two stationary points of the dispersion found; model assumption violated")]
    ModelAssumption,

    #[error("frequency {omega} sits on a band edge of the spectral density")]
    BandEdge { omega: f64 },

    #[error("operation requires the roton regime but the dispersion has no stationary points")]
    NoRoton,

    #[error("sampling step dt = {dt} too coarse to resolve the roton period (need dt <= {max_dt})")]
    Resolution { dt: f64, max_dt: f64 },
}
