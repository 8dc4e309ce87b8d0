//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(&'static str),

    #[error("zero algebra element has no Cartan decomposition")]
    ZeroElement,

    #[error("element is not conjugate to the compact Cartan axis (invariant {invariant:.6e} <= 0)")]
    NonElliptic { invariant: f64 },

    #[error("conjugation left the Lie algebra (projection residual {residual:.3e})")]
    AlgebraProjection { residual: f64 },

    #[error("quadrature did not converge: error estimate {error_estimate:.3e} after {subdivisions} subdivisions")]
    QuadratureNoConvergence {
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("integrand envelope does not decay at the probe horizon (t = {probe:.3e})")]
    EnvelopeNotDecaying { probe: f64 },

    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("S-operator limit did not stabilise at horizon {horizon:.3e} (residual {residual:.3e})")]
    HorizonNoConvergence { horizon: f64, residual: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("projector pair violates its invariants: {0}")]
    InvalidProjector(String),

    #[error("tabulated profile: {0}")]
    Tabulated(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
