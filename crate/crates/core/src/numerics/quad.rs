//! Adaptive quadrature on Gauss-Kronrod 7/15 pairs, for complex-valued
//! integrands, plus an envelope-truncated driver for improper oscillatory
//! integrals of the form integral of envelope(t) * exp(i phase(t)).

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (non-negative half).
/// Odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Envelope magnitude below which improper tails are cut.
    pub truncation_threshold: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 4000,
            truncation_threshold: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(CoreError::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(CoreError::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        if !(self.truncation_threshold > 0.0) {
            return Err(CoreError::InvalidParameter(
                "truncation_threshold must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Same tolerances scaled by a factor; used for inner integrals.
    pub fn tightened(&self, factor: f64) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    /// The finite interval actually integrated (equals the request for proper
    /// integrals, the chosen cut points for improper ones).
    pub truncated_at: (f64, f64),
    /// False when the subdivision budget ran out before the tolerance was met;
    /// the value and error estimate are still the best available.
    pub converged: bool,
}

/// One application of the 7/15 pair on [a, b].
pub fn gauss_kronrod_15<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut res_abs = f_center.norm() * WGK[7];
    let mut samples = [Complex64::ZERO; 15];
    samples[7] = f_center;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        samples[j] = f1;
        samples[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((samples[j] - mean).norm() + (samples[14 - j] - mean).norm());
    }

    let value = kronrod * half;
    let raw_err = ((kronrod - gauss) * half).norm();
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    // standard QUADPACK rescaling of the raw difference
    let mut err = raw_err;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let min_err = 50.0 * f64::EPSILON * res_abs;
    if min_err > err {
        err = min_err;
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// Globally adaptive integration of `f` over the finite interval [a, b].
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate meets `max(abs_tol, rel_tol * |value|)` or the subdivision budget
/// is exhausted.  The returned sum is accumulated in left-to-right segment
/// order, so results are deterministic.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    spec.validate()?;
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::ZERO,
            error_estimate: 0.0,
            subdivisions_used: 0,
            truncated_at: (a, b),
            converged: true,
        });
    }

    let (v0, e0) = gauss_kronrod_15(&mut f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value: v0,
        error: e0,
    }];
    let mut subdivisions = 0usize;

    loop {
        let total: Complex64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            let (value, error_estimate) = ordered_sum(&mut segments);
            return Ok(QuadratureResult {
                value,
                error_estimate,
                subdivisions_used: subdivisions,
                truncated_at: (a, b),
                converged: false,
            });
        }
        // split the worst segment
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(i, x), (j, y)| {
                x.error
                    .partial_cmp(&y.error)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(j.cmp(i))
            })
            .map(|(i, _)| i)
            .expect("non-empty segment list");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval no longer splittable in f64; keep as-is
            segments.push(seg);
            let (value, error_estimate) = ordered_sum(&mut segments);
            return Ok(QuadratureResult {
                value,
                error_estimate,
                subdivisions_used: subdivisions,
                truncated_at: (a, b),
                converged: error_estimate <= spec.abs_tol.max(spec.rel_tol * value.norm()),
            });
        }
        let (v1, e1) = gauss_kronrod_15(&mut f, seg.a, mid);
        let (v2, e2) = gauss_kronrod_15(&mut f, mid, seg.b);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }

    let (value, error_estimate) = ordered_sum(&mut segments);
    Ok(QuadratureResult {
        value,
        error_estimate,
        subdivisions_used: subdivisions,
        truncated_at: (a, b),
        converged: true,
    })
}

fn ordered_sum(segments: &mut [Segment]) -> (Complex64, f64) {
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    let value = segments.iter().map(|s| s.value).sum();
    let err = segments.iter().map(|s| s.error).sum();
    (value, err)
}

/// Truncation points for a decaying envelope: the left and right cuts beyond
/// which the envelope magnitude stays below the threshold, each paired with a
/// geometric bound on the discarded tail.
pub(crate) fn truncation_window(
    envelope: &mut dyn FnMut(f64) -> f64,
    threshold: f64,
    scan_limit: f64,
) -> Result<((f64, f64), (f64, f64))> {
    let scan_limit = scan_limit.max(2.0);
    let right = find_cut(envelope, 1.0, threshold, scan_limit)?;
    let left = find_cut(envelope, -1.0, threshold, scan_limit)?;
    Ok((left, right))
}

/// Where the decaying envelope falls (and stays) below the threshold on one
/// side of the origin.  `dir` is +1 or -1; the scan covers doubling windows
/// out to `scan_limit` and cuts one window beyond the outermost window that
/// still carries signal.  Also returns a geometric tail bound.
fn find_cut(
    envelope: &mut dyn FnMut(f64) -> f64,
    dir: f64,
    threshold: f64,
    scan_limit: f64,
) -> Result<(f64, f64)> {
    // probe spacing no coarser than 0.5 so pulses of order-unity width are
    // seen even in distant windows; count capped to keep scans cheap
    let window_max = |env: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64| -> f64 {
        let probes = (((hi - lo) / 0.5).ceil() as usize).clamp(8, 512);
        let mut m: f64 = 0.0;
        for i in 0..=probes {
            let t = lo + (hi - lo) * (i as f64) / (probes as f64);
            m = m.max(env(dir * t).abs());
        }
        m
    };

    let mut t = 1.0f64;
    let mut last_live = 0.0f64; // outer edge of the outermost window with signal
    let mut maxima: Vec<(f64, f64)> = Vec::new(); // (outer edge, window max)
    let m0 = window_max(envelope, 0.0, 1.0);
    maxima.push((1.0, m0));
    if m0 >= threshold {
        last_live = 1.0;
    }
    while t < scan_limit {
        let next = (2.0 * t).min(scan_limit);
        let m = window_max(envelope, t, next);
        maxima.push((next, m));
        if m >= threshold {
            last_live = next;
        }
        t = next;
    }
    // keep doubling past the scan limit while the envelope still carries signal
    let mut guard = 0;
    while last_live >= t {
        let next = 2.0 * t;
        let m = window_max(envelope, t, next);
        maxima.push((next, m));
        if m >= threshold {
            last_live = next;
        }
        t = next;
        guard += 1;
        if guard > 20 {
            return Err(CoreError::EnvelopeNotDecaying { probe: dir * t });
        }
    }
    let cut = if last_live == 0.0 { 1.0 } else { 2.0 * last_live };

    // geometric tail bound from the decay of the last two windows
    let n = maxima.len();
    let tail = if n >= 2 {
        let (edge_prev, m_prev) = maxima[n - 2];
        let (edge_last, m_last) = maxima[n - 1];
        let width = (edge_last - edge_prev).abs().max(1.0);
        let ratio = if m_prev > 0.0 { m_last / m_prev } else { 0.0 };
        if ratio < 0.9 {
            m_last * width * ratio / (1.0 - ratio)
        } else {
            m_last * width * 10.0
        }
    } else {
        0.0
    };
    Ok((dir * cut, tail))
}

/// Improper oscillatory integral of envelope(t) * exp(i phase(t)) over the
/// real line.  The tails are cut where the envelope magnitude stays below
/// `spec.truncation_threshold`; a geometric bound on the discarded tails is
/// added to the error estimate.
pub fn integrate_improper_oscillatory<E, P>(
    envelope: E,
    phase: P,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    E: FnMut(f64) -> f64,
    P: FnMut(f64) -> f64,
{
    integrate_improper_oscillatory_hinted(envelope, phase, spec, (1u64 << 20) as f64)
}

/// Same as [`integrate_improper_oscillatory`], scanning for truncation points
/// out to at least `scan_limit` on both sides.  Callers that know the profile
/// horizon should pass it so distant pulses cannot be missed.
pub fn integrate_improper_oscillatory_hinted<E, P>(
    mut envelope: E,
    mut phase: P,
    spec: &QuadratureSpec,
    scan_limit: f64,
) -> Result<QuadratureResult>
where
    E: FnMut(f64) -> f64,
    P: FnMut(f64) -> f64,
{
    spec.validate()?;
    let ((cut_left, tail_left), (cut_right, tail_right)) =
        truncation_window(&mut envelope, spec.truncation_threshold, scan_limit)?;

    let mut inner = integrate_adaptive(
        |t| Complex64::from_polar(1.0, phase(t)) * envelope(t),
        cut_left,
        cut_right,
        spec,
    )?;
    inner.error_estimate += tail_left + tail_right;
    inner.truncated_at = (cut_left, cut_right);
    Ok(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_and_sine() {
        let spec = QuadratureSpec::default();
        let r = integrate_adaptive(|_| c(1.0), 0.0, 1.0, &spec).unwrap();
        assert!((r.value.re - 1.0).abs() < spec.abs_tol);
        assert!(r.converged);

        let r = integrate_adaptive(|x| c(x.sin()), 0.0, PI, &spec).unwrap();
        assert!((r.value.re - 2.0).abs() < spec.rel_tol * 2.0 + spec.abs_tol);
    }

    #[test]
    fn damped_oscillation_closed_form() {
        // integral over [0, inf) of e^{-x} e^{2ix} dx = 1/(1-2i) = (1+2i)/5,
        // truncated where the envelope drops below threshold
        let spec = QuadratureSpec::default();
        let cut = -(spec.truncation_threshold.ln()); // e^{-x} < threshold
        let r = integrate_adaptive(
            |x| Complex64::from_polar((-x).exp(), 2.0 * x),
            0.0,
            cut + 5.0,
            &spec,
        )
        .unwrap();
        let expect = Complex64::new(0.2, 0.4);
        assert!((r.value - expect).norm() < 1e-10, "{:?}", r.value);
    }

    #[test]
    fn polynomial_exactness_of_the_base_rule() {
        // K15 integrates polynomials up to degree 22 exactly
        let spec = QuadratureSpec {
            abs_tol: 1e-13,
            ..Default::default()
        };
        for deg in [5usize, 13, 22] {
            let exact = 1.0 / (deg as f64 + 1.0); // integral of x^deg on [0,1]
            let r = integrate_adaptive(|x| c(x.powi(deg as i32)), 0.0, 1.0, &spec).unwrap();
            assert!(
                (r.value.re - exact).abs() < 1e-14,
                "degree {deg}: {} vs {exact}",
                r.value.re
            );
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged_not_fatal() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            ..Default::default()
        };
        let r = integrate_adaptive(|x| c((40.0 * x).sin() / (1e-3 + x * x)), -1.0, 1.0, &spec)
            .unwrap();
        assert!(!r.converged);
        assert!(r.error_estimate > 0.0);
    }

    #[test]
    fn improper_zero_envelope() {
        let spec = QuadratureSpec::default();
        let r = integrate_improper_oscillatory(|_| 0.0, |t| t, &spec).unwrap();
        assert_eq!(r.value, Complex64::ZERO);
    }

    #[test]
    fn improper_sech_fourier_pair() {
        // integral of sech(t) e^{i w t} dt = pi * sech(pi w / 2)
        let spec = QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            truncation_threshold: 1e-14,
            ..Default::default()
        };
        for w in [0.5, 2.0] {
            let r =
                integrate_improper_oscillatory(|t: f64| 1.0 / t.cosh(), |t| w * t, &spec).unwrap();
            let expect = PI / (PI * w / 2.0).cosh();
            assert!(
                (r.value.re - expect).abs() < 1e-8,
                "w={w}: {} vs {expect}",
                r.value.re
            );
            assert!(r.value.im.abs() < 1e-8);
            assert!(r.truncated_at.0 < -20.0 && r.truncated_at.1 > 20.0);
        }
    }

    #[test]
    fn improper_even_envelope_odd_phase_is_real() {
        let spec = QuadratureSpec::default();
        let r = integrate_improper_oscillatory(
            |t: f64| (-t * t / 4.0).exp(),
            |t| t * t * t * 0.2 + 3.0 * t,
            &spec,
        )
        .unwrap();
        assert!(r.value.im.abs() < r.error_estimate + 1e-10);
    }

    #[test]
    fn improper_pulse_far_from_origin_is_found() {
        // envelope centred at t = 300; the scan hint must catch it
        let spec = QuadratureSpec::default();
        let r = integrate_improper_oscillatory_hinted(
            |t: f64| (-(t - 300.0) * (t - 300.0)).exp(),
            |_| 0.0,
            &spec,
            1024.0,
        )
        .unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-8);
    }
}
