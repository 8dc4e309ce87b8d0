//! Quadrature, the group-manifold ODE stepper and the associated Legendre
//! functions used by the oscillator transition matrix.

pub mod legendre;
pub mod quad;
pub mod stepper;

pub use legendre::assoc_legendre;
pub use quad::{
    integrate_adaptive, integrate_improper_oscillatory, integrate_improper_oscillatory_hinted,
    QuadratureResult, QuadratureSpec,
};
pub use stepper::ode_propagate;
