//! Cumulative phase integrals on a monotone node grid.
//!
//! Oscillatory amplitudes query phases like alpha(t) = integral of |B| or
//! integral of p densely.  The cache integrates the rate function panel by
//! panel with the 15-point Kronrod rule; a query evaluates the partial panel
//! from the nearest node with the same rule, so no interpolation error enters.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::numerics::quad::gauss_kronrod_15;

pub(crate) struct CumulativeIntegral<F: Fn(f64) -> f64> {
    rate: F,
    nodes: Vec<f64>,
    cum: Vec<f64>,
}

impl<F: Fn(f64) -> f64> CumulativeIntegral<F> {
    /// Build over [a, b] with per-panel error below `tol` (absolute, per panel).
    pub fn build(rate: F, a: f64, b: f64, tol: f64) -> Result<Self> {
        assert!(b > a, "cumulative integral needs a forward interval");
        let mut panels: Vec<(f64, f64, f64)> = Vec::new(); // (lo, hi, integral)
        let mut stack: Vec<(f64, f64, u32)> = Vec::new();
        let initial = 64usize;
        for i in 0..initial {
            let lo = a + (b - a) * (i as f64) / (initial as f64);
            let hi = a + (b - a) * ((i + 1) as f64) / (initial as f64);
            stack.push((lo, hi, 0));
        }
        while let Some((lo, hi, depth)) = stack.pop() {
            let mut f = |x: f64| Complex64::new((self_rate(&rate))(x), 0.0);
            let (v, e) = gauss_kronrod_15(&mut f, lo, hi);
            if e <= tol || depth >= 40 {
                if depth >= 40 && e > tol * 1e3 {
                    return Err(CoreError::QuadratureNoConvergence {
                        error_estimate: e,
                        subdivisions: panels.len(),
                    });
                }
                panels.push((lo, hi, v.re));
            } else {
                let mid = 0.5 * (lo + hi);
                stack.push((mid, hi, depth + 1));
                stack.push((lo, mid, depth + 1));
            }
        }
        panels.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut nodes = Vec::with_capacity(panels.len() + 1);
        let mut cum = Vec::with_capacity(panels.len() + 1);
        nodes.push(a);
        cum.push(0.0);
        let mut acc = 0.0;
        for (_, hi, v) in &panels {
            acc += v;
            nodes.push(*hi);
            cum.push(acc);
        }
        Ok(CumulativeIntegral { rate, nodes, cum })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// Integral of the rate from the left edge to x.  Outside the cached
    /// range the rate is continued as a constant (exact for profiles that
    /// have reached their asymptote by the cache boundary).
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.range();
        if x < a {
            return (self.rate)(a) * (x - a);
        }
        if x > b {
            return *self.cum.last().unwrap() + (self.rate)(b) * (x - b);
        }
        let idx = match self
            .nodes
            .binary_search_by(|n| n.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.cum[i],
            Err(i) => i - 1,
        };
        let mut f = |t: f64| Complex64::new((self.rate)(t), 0.0);
        let (v, _) = gauss_kronrod_15(&mut f, self.nodes[idx], x);
        self.cum[idx] + v.re
    }

    /// Integral from `x0` to `x`.
    #[allow(dead_code)]
    pub fn between(&self, x0: f64, x: f64) -> f64 {
        self.eval(x) - self.eval(x0)
    }

    /// Smallest x with eval(x) >= target, by bisection (rate must be positive).
    pub fn invert_monotone(&self, target: f64) -> f64 {
        let (mut lo, mut hi) = self.range();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * (1.0 + hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

// helper so the closure above can borrow `rate` while `panels` is mutated
fn self_rate<F: Fn(f64) -> f64>(rate: &F) -> impl Fn(f64) -> f64 + '_ {
    move |x| rate(x)
}
