//! Phase functions `H_{-1}, H_0, H_1, ...` of a series and the local maxima
//! of `H_{-1}` on `(0, inf)`.
//!
//! With `u = x t`, `t F(u/t, t) = H_{-1}(u) + t H_0(u) + t^2 H_1(u) + ...`.
//! Every level is a finite combination of `Li_s(e^{-alpha u})`, so all
//! u-derivatives follow from `d/du Li_s(e^{-alpha u}) = -alpha Li_{s-1}(e^{-alpha u})`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::qseries::SeriesSpec;
use crate::specfun::{bernoulli_poly, gamma_fn, log1m_exp_neg, polylog_int_exp_neg, BERNOULLI_MAX};

/// Largest `m` tried when looking for the first nonzero `H^{(2m)}`.
pub const MAX_HALF_ORDER: usize = 16;

/// Relative tolerance for deciding that an even derivative vanishes.
pub const DEGENERATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFamily {
    spec: SeriesSpec,
    /// `(alpha_j, f(alpha_j))`, ascending in alpha, zero `f` excluded.
    falpha: Vec<(f64, f64)>,
}

impl PhaseFamily {
    pub fn spec(&self) -> &SeriesSpec {
        &self.spec
    }

    pub fn falpha(&self) -> &[(f64, f64)] {
        &self.falpha
    }

    /// `sum_j alpha_j^2 |f_j|`, the unit for derivative tolerances.
    fn scale(&self) -> f64 {
        let s: f64 = self.falpha.iter().map(|(a, f)| a * a * f.abs()).sum();
        if s > 0.0 {
            s
        } else if self.spec.a() > 0.0 {
            2.0 * self.spec.a()
        } else {
            1.0
        }
    }

    fn max_alpha(&self) -> f64 {
        self.falpha.iter().map(|p| p.0).fold(0.0, f64::max)
    }
}

/// Groups the series terms by `alpha` and forms `f(alpha) = -sum S / beta`.
pub fn build_phase(spec: &SeriesSpec) -> PhaseFamily {
    let mut falpha: Vec<(f64, f64, f64)> = Vec::new();
    for t in spec.terms() {
        let c = -t.s / t.beta;
        match falpha.iter_mut().find(|p| p.0 == t.alpha) {
            Some(p) => {
                p.1 += c;
                p.2 += c.abs();
            }
            None => falpha.push((t.alpha, c, c.abs())),
        }
    }
    let falpha = falpha
        .into_iter()
        .filter(|&(_, f, mag)| f.abs() > 1e-14 * mag)
        .map(|(a, f, _)| (a, f))
        .collect();
    PhaseFamily {
        spec: spec.clone(),
        falpha,
    }
}

fn check_u(func: &'static str, u: f64) -> Result<()> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain(
            func,
            format!("u = {u} must be a finite positive real"),
        ));
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `k`-th u-derivative of `H_level` (`k = 0` gives the value).
pub fn h_level_deriv(pf: &PhaseFamily, level: i32, k: usize, u: f64) -> Result<f64> {
    check_u("H", u)?;
    let spec = &pf.spec;
    let kf = k as i32;
    match level {
        -1 => {
            let poly = match k {
                0 => spec.v() * u - spec.a() * u * u,
                1 => spec.v() - 2.0 * spec.a() * u,
                2 => -2.0 * spec.a(),
                _ => 0.0,
            };
            let mut s = poly;
            for &(a, f) in &pf.falpha {
                s -= f * (-a).powi(kf) * polylog_int_exp_neg(2 - kf as i64, a * u)?;
            }
            Ok(s)
        }
        0 => {
            let mut s = match k {
                0 => -spec.b() * u,
                1 => -spec.b(),
                _ => 0.0,
            };
            for t in spec.terms() {
                let w = (t.gamma / t.beta - 0.5) * t.s;
                s -= w * (-t.alpha).powi(kf) * polylog_int_exp_neg(1 - kf as i64, t.alpha * u)?;
            }
            Ok(s)
        }
        m if m >= 1 => {
            let m = m as usize;
            if m + 1 > BERNOULLI_MAX {
                return Err(Error::IndexOverflow {
                    index: m,
                    max: BERNOULLI_MAX - 1,
                });
            }
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            let fact = factorial(m + 1);
            let mut s = 0.0;
            for t in spec.terms() {
                let c =
                    t.beta.powi(m as i32) * t.s * bernoulli_poly(m + 1, t.gamma / t.beta)? / fact;
                s += c
                    * (-t.alpha).powi(kf)
                    * polylog_int_exp_neg(1 - m as i64 - kf as i64, t.alpha * u)?;
            }
            Ok(sign * s)
        }
        _ => Err(domain("H", format!("level {level} below -1"))),
    }
}

/// `H_level(u)`.
pub fn h(pf: &PhaseFamily, level: i32, u: f64) -> Result<f64> {
    h_level_deriv(pf, level, 0, u)
}

/// `d^k H_{-1} / du^k` at `u`, `k >= 1`.
pub fn h_deriv(pf: &PhaseFamily, k: usize, u: f64) -> Result<f64> {
    if k == 0 {
        return Err(domain("H_deriv", "derivative order must be positive"));
    }
    h_level_deriv(pf, -1, k, u)
}

/// Outcome of [`check_hypothesis`].
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub holds: bool,
    pub diagnostic: String,
}

/// Decides whether `H_{-1}` is increasing on some `(0, eps]`.
///
/// Near zero `H'_{-1}(u) ~ -(sum alpha_j f_j) log u`, so the sign of that sum
/// settles it. A balanced sum falls back to sampling `H'` at
/// `eps 2^{-i}`, `i < 40`.
pub fn check_hypothesis(pf: &PhaseFamily) -> HypothesisCheck {
    let lead: f64 = pf.falpha.iter().map(|(a, f)| a * f).sum();
    let mag: f64 = pf.falpha.iter().map(|(a, f)| (a * f).abs()).sum();
    if lead > 1e-12 * mag {
        return HypothesisCheck {
            holds: true,
            diagnostic: format!("sum alpha_j f_j = {lead} > 0: H' -> +inf as u -> 0+"),
        };
    }
    if lead < -1e-12 * mag {
        return HypothesisCheck {
            holds: false,
            diagnostic: format!("sum alpha_j f_j = {lead} < 0: H' -> -inf as u -> 0+"),
        };
    }
    let max_alpha = pf.max_alpha();
    let eps = if max_alpha > 0.0 {
        (0.5 / max_alpha).min(1.0)
    } else {
        1.0
    };
    for i in 0..40 {
        let u = eps * 0.5f64.powi(i);
        match h_deriv(pf, 1, u) {
            Ok(d) if d >= 0.0 => {}
            Ok(d) => {
                return HypothesisCheck {
                    holds: false,
                    diagnostic: format!("balanced log term; sampled H'({u:e}) = {d:e} < 0"),
                }
            }
            Err(e) => {
                return HypothesisCheck {
                    holds: false,
                    diagnostic: format!("balanced log term; H' failed at {u:e}: {e}"),
                }
            }
        }
    }
    HypothesisCheck {
        holds: true,
        diagnostic: format!("balanced log term; H' >= 0 at 40 samples below {eps}"),
    }
}

/// A local maximum of `H_{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub u: f64,
    /// Half the order of the first nonvanishing derivative.
    pub order: usize,
    /// `H_{-1}(u)`.
    pub h_value: f64,
    /// `H_{-1}^{(2 order)}(u)`, negative.
    pub h2m: f64,
    /// Leading Laplace constant.
    pub c_u: f64,
}

/// Upper end of the root search, beyond which `H'_{-1} < 0`.
fn search_bound(pf: &PhaseFamily) -> Result<f64> {
    let spec = &pf.spec;
    let min_alpha = pf.falpha.first().map(|p| p.0).unwrap_or(1.0);
    let mut u_hi = if spec.a() > 0.0 {
        let s: f64 = pf.falpha.iter().map(|(_, f)| f.abs() * PI * PI / 6.0).sum();
        (spec.v().abs() + s + 1.0) / spec.a() + 1.0
    } else if spec.v() < 0.0 {
        let mut u = 1.0;
        loop {
            let s: f64 = pf
                .falpha
                .iter()
                .map(|(a, f)| a * f.abs() * (-log1m_exp_neg(a * u)).max(0.0))
                .sum();
            if spec.v() + s < 0.0 || u > 1e6 {
                break u;
            }
            u *= 2.0;
        }
    } else {
        50.0 / min_alpha
    };
    // the bounds are sufficient conditions; make sure the tail really is
    // decreasing or flat before trusting them
    for _ in 0..60 {
        if h_deriv(pf, 1, u_hi)? <= 0.0 {
            break;
        }
        u_hi *= 2.0;
    }
    Ok(u_hi)
}

fn search_grid(pf: &PhaseFamily, u_hi: f64) -> Vec<f64> {
    let mut grid = Vec::new();
    let n_geo = 200;
    let (lo, hi) = (1e-8f64.ln(), 1.0f64.min(u_hi).ln());
    for i in 0..=n_geo {
        grid.push((lo + (hi - lo) * i as f64 / n_geo as f64).exp());
    }
    let max_alpha = pf.max_alpha();
    let step = 0.05
        * if max_alpha > 0.0 {
            (1.0 / max_alpha).min(1.0)
        } else {
            1.0
        };
    let mut u = 1.0;
    while u < u_hi {
        u += step;
        grid.push(u.min(u_hi));
    }
    grid
}

fn bisect(pf: &PhaseFamily, mut lo: f64, mut hi: f64) -> Result<f64> {
    // H'(lo) > 0 >= H'(hi)
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-15 * mid.max(1.0) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if h_deriv(pf, 1, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Smallest `m` with `|H^{(2m)}(u)|` above the degeneracy tolerance.
fn classify(pf: &PhaseFamily, u: f64) -> Result<(usize, f64)> {
    let tol = DEGENERATE_TOL * pf.scale();
    for m in 1..=MAX_HALF_ORDER {
        let d = h_deriv(pf, 2 * m, u)?;
        if d.abs() > tol {
            return Ok((m, d));
        }
    }
    Err(Error::Degenerate { u })
}

/// `C_u = e^{H_0(u)} Gamma(1/(2m)) / m * (-(2m)! / H^{(2m)}(u))^{1/(2m)}`.
pub fn laplace_constant(pf: &PhaseFamily, u: f64, m: usize, h2m: f64) -> Result<f64> {
    let mf = m as f64;
    let h0 = h(pf, 0, u)?;
    Ok(h0.exp() * gamma_fn(1.0 / (2.0 * mf))? / mf
        * (-factorial(2 * m) / h2m).powf(1.0 / (2.0 * mf)))
}

/// All local maxima of `H_{-1}` on `(0, inf)`, ascending in `u`.
pub fn stationary_points(pf: &PhaseFamily) -> Result<Vec<StationaryPoint>> {
    let u_hi = search_bound(pf)?;
    let grid = search_grid(pf, u_hi);
    let mut out = Vec::new();
    let mut prev_u = grid[0];
    let mut prev_d = h_deriv(pf, 1, prev_u)?;
    for &u in &grid[1..] {
        let d = h_deriv(pf, 1, u)?;
        if prev_d > 0.0 && d < 0.0 {
            let root = bisect(pf, prev_u, u)?;
            let (order, h2m) = classify(pf, root)?;
            if h2m < 0.0 {
                out.push(StationaryPoint {
                    u: root,
                    order,
                    h_value: h(pf, -1, root)?,
                    h2m,
                    c_u: laplace_constant(pf, root, order, h2m)?,
                });
            }
        }
        prev_u = u;
        prev_d = d;
    }
    Ok(out)
}
