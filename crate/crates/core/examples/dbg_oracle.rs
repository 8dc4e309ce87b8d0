use natrans_core::*;
use std::sync::Arc;
use num_complex::Complex64;

fn main() {
    let k = 1.0f64;
    let u0 = 0.02f64;
    let bp = BarrierProfile::new(
        Arc::new(move |x: f64| u0 * (-x * x / 2.0).exp()),
        k, 12.0, u0 * (-72.0f64).exp() * 1.01 + 1e-300, 0.0, 0.0,
    ).unwrap();
    let ctrl = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-13, ..Default::default() };
    let b = |x: f64| {
        let u = bp.u(x);
        AlgebraElement::new([0.0, u / k, -(2.0 * k * k - u) / k], Signature::NonCompact)
    };
    let mut r_prev = Complex64::ZERO;
    for i in 0..4 {
        let horizon = 12.0 * (1 << i) as f64;
        let g = ode_propagate(b, -horizon, horizon, &ctrl).unwrap();
        let r = g.m.0[0][1] / g.m.0[0][0];
        println!("H={horizon}: r={:?} |r|={:.6e} residual_vs_prev={:.3e}", r, r.norm(), (r - r_prev).norm());
        r_prev = r;
    }
}
