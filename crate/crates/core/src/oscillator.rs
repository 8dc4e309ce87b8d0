//! Parametric excitation of a quantum oscillator.
//!
//! A frequency sweep Omega(t) maps onto an over-barrier reflection problem
//! with momentum p(x) = Omega(x); the reflection coefficient theta then
//! yields level-transition probabilities through the closed formula
//!
//!   W_mn = (n_<! / n_>!) | sqrt(1-theta) P^{|m-n|/2}_{(m+n)/2}(sqrt(1-theta)) |^2
//!
//! evaluated as printed; row sums are reported as a diagnostic only, not
//! asserted to be 1.  Odd |m - n| entries are set to zero (parity selection:
//! the x -> -x symmetry of the oscillator forbids parity-changing
//! transitions, and the formula would need a half-integer order there).

use std::sync::Arc;

use crate::engine::{reflection_amplitude, BarrierProfile, ScalarFn};
use crate::error::{CoreError, Result};
use crate::numerics::legendre::assoc_legendre;
use crate::numerics::quad::QuadratureSpec;
use crate::phase::CumulativeIntegral;

/// Hard cap on the matrix size: keeps every factorial ratio representable
/// through log-factorials in double precision.
pub const MAX_LEVEL: u32 = 60;

/// Time-dependent oscillator frequency (and optional mass) with constant
/// asymptotes.
#[derive(Clone)]
pub struct OscillatorSpec {
    pub omega: ScalarFn,
    pub omega_minus: f64,
    pub omega_plus: f64,
    pub horizon: f64,
    pub tol: f64,
    pub mass: Option<ScalarFn>,
}

impl OscillatorSpec {
    pub fn new(
        omega: ScalarFn,
        omega_minus: f64,
        omega_plus: f64,
        horizon: f64,
        tol: f64,
        mass: Option<ScalarFn>,
    ) -> Result<OscillatorSpec> {
        if !(omega_minus > 0.0 && omega_plus > 0.0 && horizon > 0.0 && tol > 0.0) {
            return Err(CoreError::InvalidProfile(
                "oscillator spec needs positive asymptotes, horizon and tolerance".into(),
            ));
        }
        const SAMPLES: usize = 1025;
        for i in 0..SAMPLES {
            let t = -horizon + 2.0 * horizon * (i as f64) / ((SAMPLES - 1) as f64);
            if !(omega(t) > 0.0) {
                return Err(CoreError::InvalidProfile(format!(
                    "frequency must stay positive (fails near t = {t})"
                )));
            }
            if let Some(m) = &mass {
                if !(m(t) > 0.0) {
                    return Err(CoreError::InvalidProfile(format!(
                        "mass must stay positive (fails near t = {t})"
                    )));
                }
            }
        }
        for (t, asym) in [(-horizon, omega_minus), (horizon, omega_plus)] {
            let scale = if let Some(m) = &mass { m(t) } else { 1.0 };
            let dev = (scale * omega(t) - asym).abs();
            if dev > tol {
                return Err(CoreError::InvalidProfile(format!(
                    "effective frequency at t = {t} deviates from its asymptote by {dev:.3e}"
                )));
            }
        }
        Ok(OscillatorSpec {
            omega,
            omega_minus,
            omega_plus,
            horizon,
            tol,
            mass,
        })
    }
}

/// Remove a time-dependent mass by the substitution t' = integral dt/m(t),
/// Omega' = m Omega.  Identity for specs without a mass profile.
pub fn reduce_mass(spec: &OscillatorSpec) -> Result<OscillatorSpec> {
    let Some(mass) = spec.mass.clone() else {
        return Ok(spec.clone());
    };
    let h = spec.horizon;
    let inv_mass = {
        let mass = Arc::clone(&mass);
        move |t: f64| 1.0 / mass(t)
    };
    let pad = 1.0 + 0.05 * h;
    let clock = Arc::new(CumulativeIntegral::build(inv_mass, -h - pad, h + pad, 1e-13)?);
    let origin = clock.eval(0.0);

    // new time runs from clock(-H) to clock(+H), re-anchored at t = 0
    let t_new_minus = clock.eval(-h) - origin;
    let t_new_plus = clock.eval(h) - origin;
    let new_horizon = (-t_new_minus).min(t_new_plus);

    let omega = Arc::clone(&spec.omega);
    let mass_for_eval = Arc::clone(&mass);
    let clock_for_eval = Arc::clone(&clock);
    let new_omega: ScalarFn = Arc::new(move |t_new: f64| {
        let t_old = clock_for_eval.invert_monotone(t_new + origin);
        mass_for_eval(t_old) * omega(t_old)
    });

    OscillatorSpec::new(
        new_omega,
        spec.omega_minus,
        spec.omega_plus,
        new_horizon,
        spec.tol * 2.0 + 1e-13 * spec.omega_minus,
        None,
    )
}

/// The over-barrier reflection coefficient of the mapped scattering problem
/// with p(x) = Omega(x):
/// theta = (1/4) | integral of e^{2 i int Omega} Omega'(t)/Omega(t) dt |^2.
/// Requires a constant-mass spec (apply [`reduce_mass`] first).
pub fn theta_coefficient(spec: &OscillatorSpec, ctrl: &QuadratureSpec) -> Result<f64> {
    if spec.mass.is_some() {
        return Err(CoreError::InvalidProfile(
            "theta_coefficient needs a constant-mass spec; call reduce_mass first".into(),
        ));
    }
    let bp = mapped_barrier(spec)?;
    Ok(reflection_amplitude(&bp, ctrl)?.probability)
}

/// The scattering problem equivalent to the frequency sweep: incident
/// wavenumber k = Omega(-inf) and potential U = k^2 - Omega^2.
pub fn mapped_barrier(spec: &OscillatorSpec) -> Result<BarrierProfile> {
    let k = spec.omega_minus;
    let omega = Arc::clone(&spec.omega);
    let u_plus = k * k - spec.omega_plus * spec.omega_plus;
    BarrierProfile::new(
        Arc::new(move |x: f64| {
            let w = omega(x);
            k * k - w * w
        }),
        k,
        spec.horizon,
        (2.0 * spec.omega_minus.max(spec.omega_plus) * spec.tol).max(1e-14 * k * k),
        0.0,
        u_plus,
    )
}

/// Level-transition probabilities for levels up to n_max.
#[derive(Debug, Clone)]
pub struct TransitionMatrixSlice {
    pub theta: f64,
    pub n_max: u32,
    entries: Vec<f64>,
    /// Diagnostic carried over from the reflection problem; 0 when the slice
    /// was built from a bare theta.
    pub adiabaticity_ratio: f64,
}

impl TransitionMatrixSlice {
    pub fn get(&self, m: u32, n: u32) -> f64 {
        assert!(m <= self.n_max && n <= self.n_max, "level out of range");
        self.entries[(m as usize) * (self.n_max as usize + 1) + n as usize]
    }

    /// For each starting level n, the sum over m <= n_max of W_mn.
    /// Reported as a diagnostic; the printed formula does not guarantee
    /// unit sums for theta > 0.
    pub fn row_sums(&self) -> Vec<f64> {
        let size = self.n_max as usize + 1;
        (0..size)
            .map(|n| (0..size).map(|m| self.entries[m * size + n]).sum())
            .collect()
    }

    pub fn is_adiabatic(&self, threshold: f64) -> bool {
        self.adiabaticity_ratio < threshold
    }
}

/// Fill the transition matrix from a reflection coefficient theta in [0, 1).
pub fn perelomov_popov_matrix(theta: f64, n_max: u32) -> Result<TransitionMatrixSlice> {
    if !(0.0..1.0).contains(&theta) {
        return Err(CoreError::InvalidParameter(format!(
            "theta = {theta} outside [0, 1)"
        )));
    }
    if n_max > MAX_LEVEL {
        return Err(CoreError::InvalidParameter(format!(
            "n_max = {n_max} exceeds the cap {MAX_LEVEL}"
        )));
    }
    // log-factorials up to n_max
    let mut ln_fact = vec![0.0f64; n_max as usize + 1];
    for i in 1..ln_fact.len() {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let x = (1.0 - theta).sqrt();
    let size = n_max as usize + 1;
    let mut entries = vec![0.0f64; size * size];
    for m in 0..=n_max {
        for n in m..=n_max {
            let w = if (n - m) % 2 != 0 {
                0.0
            } else {
                let mu = (n - m) / 2;
                let nu = (n + m) / 2;
                let p = assoc_legendre(mu, nu, x)?;
                if p == 0.0 {
                    0.0
                } else {
                    let ln_w = ln_fact[m.min(n) as usize] - ln_fact[m.max(n) as usize]
                        + (1.0 - theta).ln()
                        + 2.0 * p.abs().ln();
                    ln_w.exp()
                }
            };
            entries[(m as usize) * size + (n as usize)] = w;
            entries[(n as usize) * size + (m as usize)] = w;
        }
    }
    // theta = 0 must give the identity exactly
    if theta == 0.0 {
        for m in 0..size {
            for n in 0..size {
                entries[m * size + n] = if m == n { 1.0 } else { 0.0 };
            }
        }
    }
    Ok(TransitionMatrixSlice {
        theta,
        n_max,
        entries,
        adiabaticity_ratio: 0.0,
    })
}

/// Full pipeline: mass reduction, reflection coefficient, transition matrix.
pub fn excitation_pipeline(
    spec: &OscillatorSpec,
    n_max: u32,
    ctrl: &QuadratureSpec,
) -> Result<TransitionMatrixSlice> {
    let reduced = reduce_mass(spec)?;
    let bp = mapped_barrier(&reduced)?;
    let reflection = reflection_amplitude(&bp, ctrl)?;
    let theta = reflection.probability.min(1.0 - 1e-15);
    let mut slice = perelomov_popov_matrix(theta, n_max)?;
    slice.adiabaticity_ratio = reflection.adiabaticity_ratio;
    Ok(slice)
}
