//! Non-adiabatic transition probabilities from first-order dynamics on the
//! SU(2) and SU(1,1) group manifolds.
//!
//! The crate treats three physical problems through one code path:
//!
//! * spin flip in a slowly varying magnetic field (su(2)),
//! * over-barrier reflection of a one-dimensional wave (su(1,1)),
//! * parametric excitation of a quantum oscillator (mapped onto reflection).
//!
//! Module map:
//!
//! * [`algebra`]   — algebra/group types, Cartan decomposition, adjoint norm;
//! * [`numerics`]  — adaptive quadrature, the geometric ODE stepper, and the
//!   associated Legendre functions;
//! * [`oracle`]    — exact propagation and the S-operator limit used to
//!   validate every approximation;
//! * [`engine`]    — the adiabatic approximation machinery (gamma element,
//!   spin-flip / reflection amplitudes, WKBJ, Maitra-Heller, Born, the
//!   first-order Fourier estimator);
//! * [`models`]    — the sech-pulse spin model and the logistic step barrier
//!   with closed-form answers and transformed integral routes, plus
//!   tabulated-profile ingestion;
//! * [`oscillator`] — reflection-coefficient mapping and level-transition
//!   matrices.

pub mod algebra;
pub mod engine;
pub mod error;
mod interp;
pub mod models;
pub mod numerics;
pub mod oracle;
pub mod oscillator;
mod phase;

pub use algebra::{
    adjoint_deficit, algebra_norm, cartan_decompose, commutator, exp_map, AlgebraElement,
    CartanFrame, GroupElement, Mat2, Signature,
};
pub use engine::{
    adiabaticity_ratio, born_amplitude, first_order_fourier_spinflip, gamma_element,
    geodesic_curvature, leading_order_probability, maitra_heller_amplitude, reflection_amplitude,
    reflection_oracle, spin_flip_amplitude, spin_flip_oracle, spin_phase_general,
    wkbj_wavefunction, BarrierProfile, PathOnSphere, SpinFieldProfile, ADIABATIC_WARN_THRESHOLD,
};
pub use error::{CoreError, Result};
pub use interp::CubicSpline;
pub use numerics::{
    assoc_legendre, integrate_adaptive, integrate_improper_oscillatory, ode_propagate,
    QuadratureResult, QuadratureSpec,
};
pub use oracle::{
    evolve, s_operator, s_operator_with_reference, transition_probability, DrivingProfile,
    ProjectorPair, SOperator, TransitionResult,
};
pub use oscillator::{
    excitation_pipeline, perelomov_popov_matrix, reduce_mass, theta_coefficient, OscillatorSpec,
    TransitionMatrixSlice, MAX_LEVEL,
};
pub use models::{
    load_tabulated, logistic_adiabatic_transformed, logistic_exact, logistic_perturbative,
    logistic_profile, rosen_zener_adiabatic_transformed, rosen_zener_exact, rosen_zener_profile,
    LogisticBarrierParams, RosenZenerParams, TabulatedProfile,
};
