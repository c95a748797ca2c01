//! Gamma function, backed by the Lanczos approximation in `statrs`.

use std::f64::consts::PI;

use statrs::function::gamma as lanczos;

use crate::error::{domain, Error, Result};

/// `Gamma(x)` for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "gamma_fn",
            format!("x = {x} is not a positive real"),
        ));
    }
    if let Some(f) = small_factorial(x) {
        return Ok(f);
    }
    Ok(lanczos::gamma(x))
}

/// `(x-1)!` as a direct product for integer `1 <= x <= 23` (exact up to 18!).
fn small_factorial(x: f64) -> Option<f64> {
    if x == x.round() && (1.0..=23.0).contains(&x) {
        Some((1..x as u32).map(f64::from).product())
    } else {
        None
    }
}

/// `log Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "ln_gamma",
            format!("x = {x} is not a positive real"),
        ));
    }
    if let Some(f) = small_factorial(x) {
        return Ok(f.ln());
    }
    Ok(lanczos::ln_gamma(x))
}

/// Sign and `log|Gamma(x)|` for any real `x` off the poles `0, -1, -2, ...`.
///
/// Negative arguments go through `Gamma(x) Gamma(1-x) = pi / sin(pi x)`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((1.0, ln_gamma(x)?));
    }
    if !x.is_finite() || x == x.round() {
        return Err(Error::Pole {
            func: "gamma",
            at: x,
        });
    }
    let s = (PI * x).sin();
    let lg = PI.ln() - s.abs().ln() - ln_gamma(1.0 - x)?;
    Ok((s.signum(), lg))
}
