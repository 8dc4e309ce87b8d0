//! Associated Legendre functions P^mu_nu(x) for integer orders, x in [0, 1],
//! Condon-Shortley phase, by upward recurrence in the degree from the
//! closed-form diagonal seed P^mu_mu.

use crate::error::{CoreError, Result};

/// P^mu_nu(x) for 0 <= mu, 0 <= nu, 0 <= x <= 1.
///
/// Returns 0 for mu > nu (the function vanishes identically there).
/// The upward degree recurrence is stable on this domain because the
/// recessive solution decays relative to P as the degree grows.
pub fn assoc_legendre(mu: u32, nu: u32, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(CoreError::InvalidParameter(format!(
            "assoc_legendre: x = {x} outside [0, 1]"
        )));
    }
    if mu > nu {
        return Ok(0.0);
    }

    // seed: P^mu_mu = (-1)^mu (2 mu - 1)!! (1 - x^2)^{mu/2}
    let mut p_prev = {
        let mut seed = 1.0;
        let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        for k in 1..=mu {
            seed *= -((2 * k - 1) as f64) * s;
        }
        seed
    };
    if nu == mu {
        return Ok(p_prev);
    }

    // P^mu_{mu+1} = x (2 mu + 1) P^mu_mu
    let mut p = x * ((2 * mu + 1) as f64) * p_prev;
    for n in (mu + 2)..=nu {
        // (n - mu) P^mu_n = (2n - 1) x P^mu_{n-1} - (n - 1 + mu) P^mu_{n-2}
        let next = (((2 * n - 1) as f64) * x * p - ((n - 1 + mu) as f64) * p_prev)
            / ((n - mu) as f64);
        p_prev = p;
        p = next;
    }
    Ok(p)
}
