//! Polylogarithms `Li_s` at integer order `s <= 2` on the real segment `[0, 1]`.
//!
//! The `*_exp_neg` variants take `y` with `x = e^{-y}` and form `1 - x` as
//! `-expm1(-y)`, which keeps full relative accuracy as `x -> 1`.

use std::f64::consts::PI;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Largest `r` for which `Li_{-r}` is tabulated.
pub const POLYLOG_NONPOS_MAX: usize = 128;

const PI2_6: f64 = PI * PI / 6.0;

/// `Li_1(x) = -log(1 - x)` for `0 <= x < 1`.
pub fn li1(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain("li1", format!("x = {x} outside [0, 1)")));
    }
    Ok(-(-x).ln_1p())
}

/// `Li_1(e^{-y})` for `y > 0`.
pub fn li1_exp_neg(y: f64) -> f64 {
    -log1m_exp_neg(y)
}

/// `log(1 - e^{-y})` for `y > 0`, accurate at both ends.
pub fn log1m_exp_neg(y: f64) -> f64 {
    if y > std::f64::consts::LN_2 {
        (-(-y).exp()).ln_1p()
    } else {
        (-(-y).exp_m1()).ln()
    }
}

/// Power series, only called for `0 <= x <= 1/2`.
fn dilog_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..=200u32 {
        pow *= x;
        let term = pow / f64::from(k * k);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Dilogarithm `Li_2(x)` for `0 <= x <= 1`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("dilog", format!("x = {x} outside [0, 1]")));
    }
    if x <= 0.5 {
        return Ok(dilog_series(x));
    }
    if x == 1.0 {
        return Ok(PI2_6);
    }
    let y = 1.0 - x;
    Ok(PI2_6 - x.ln() * y.ln() - dilog_series(y))
}

/// `Li_2(e^{-y})` for `y >= 0`.
pub fn dilog_exp_neg(y: f64) -> f64 {
    if y == 0.0 {
        return PI2_6;
    }
    if y >= std::f64::consts::LN_2 {
        return dilog_series((-y).exp());
    }
    let one_minus = -(-y).exp_m1();
    PI2_6 + y * one_minus.ln() - dilog_series(one_minus)
}

/// Numerator polynomials of `Li_{-r}(x) = P_r(x) / (1-x)^{r+1}`, coefficients
/// in increasing degree, built exactly from `P_{r+1} = x((1-x)P_r' + (r+1)P_r)`.
struct EulerianTable {
    polys: Vec<Vec<f64>>,
}

impl EulerianTable {
    fn new(max: usize) -> Self {
        let mut exact: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(1)];
        let mut polys = Vec::with_capacity(max + 1);
        polys.push(to_f64(&exact));
        for r in 0..max {
            let deg = exact.len() - 1;
            let mut q = vec![BigInt::zero(); deg + 1];
            for (i, qi) in q.iter_mut().enumerate() {
                let next = if i < deg {
                    &exact[i + 1] * BigInt::from(i + 1)
                } else {
                    BigInt::zero()
                };
                *qi = next + &exact[i] * BigInt::from(r + 1) - &exact[i] * BigInt::from(i);
            }
            let mut shifted = Vec::with_capacity(q.len() + 1);
            shifted.push(BigInt::zero());
            shifted.extend(q);
            while shifted.len() > 2 && shifted.last().is_some_and(Zero::is_zero) {
                shifted.pop();
            }
            exact = shifted;
            polys.push(to_f64(&exact));
        }
        EulerianTable { polys }
    }
}

fn to_f64(c: &[BigInt]) -> Vec<f64> {
    c.iter()
        .map(|v| v.to_f64().unwrap_or(f64::INFINITY))
        .collect()
}

static EULERIAN: LazyLock<EulerianTable> = LazyLock::new(|| EulerianTable::new(POLYLOG_NONPOS_MAX));

pub(crate) fn init_tables() {
    LazyLock::force(&EULERIAN);
}

fn eulerian(r: usize) -> Result<&'static [f64]> {
    EULERIAN
        .polys
        .get(r)
        .map(Vec::as_slice)
        .ok_or(Error::IndexOverflow {
            index: r,
            max: POLYLOG_NONPOS_MAX,
        })
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// `Li_{-r}(x)` for `0 <= x < 1`.
pub fn polylog_nonpos(r: usize, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Pole {
            func: "polylog_nonpos",
            at: x,
        });
    }
    let p = eulerian(r)?;
    Ok(horner(p, x) * (-((r + 1) as f64) * (-x).ln_1p()).exp())
}

/// `Li_{-r}(e^{-y})` for `y > 0`.
pub fn polylog_nonpos_exp_neg(r: usize, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Pole {
            func: "polylog_nonpos",
            at: (-y).exp(),
        });
    }
    let p = eulerian(r)?;
    let x = (-y).exp();
    let log_one_minus = log1m_exp_neg(y);
    Ok(horner(p, x) * (-((r + 1) as f64) * log_one_minus).exp())
}

/// `Li_s(e^{-y})` for any integer `s <= 2`.
pub fn polylog_int_exp_neg(s: i64, y: f64) -> Result<f64> {
    match s {
        2 => Ok(dilog_exp_neg(y)),
        1 => Ok(li1_exp_neg(y)),
        s if s <= 0 => polylog_nonpos_exp_neg((-s) as usize, y),
        _ => Err(domain("polylog", format!("order {s} > 2"))),
    }
}

fn polylog_int(s: i64, x: f64) -> Result<f64> {
    match s {
        2 => dilog(x),
        1 => li1(x),
        s if s <= 0 => polylog_nonpos((-s) as usize, x),
        _ => Err(domain("polylog", format!("order {s} > 2"))),
    }
}

/// Truncated Taylor expansion `sum_{k<terms} Li_{n-k}(a) x^k / k!` of
/// `Li_n(a e^x)`, valid for `|x| < min(-log a, pi)`.
pub fn polylog_shift(n: i64, a: f64, x: f64, terms: usize) -> Result<f64> {
    if n > 2 {
        return Err(domain("polylog_shift", format!("order {n} > 2")));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(domain("polylog_shift", format!("a = {a} outside (0, 1)")));
    }
    let radius = (-a.ln()).min(PI);
    if x.abs() >= radius {
        return Err(domain(
            "polylog_shift",
            format!("|x| = {} not below min(-log a, pi) = {radius}", x.abs()),
        ));
    }
    let mut sum = 0.0;
    let mut coef = 1.0;
    for k in 0..terms {
        if k > 0 {
            coef *= x / k as f64;
        }
        sum += polylog_int(n - k as i64, a)? * coef;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn li1_values() {
        assert_eq!(li1(0.0).unwrap(), 0.0);
        assert!((li1(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        let x = 1.0 - 1e-8;
        assert!((li1(x).unwrap() - 18.420680743952367).abs() < 1e-6);
        assert!(li1(1.0).is_err());
        assert!(li1(-0.1).is_err());
    }

    #[test]
    fn dilog_values() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
        assert_eq!(dilog(1.0).unwrap(), PI2_6);
        let ln2 = 2f64.ln();
        let half = PI * PI / 12.0 - ln2 * ln2 / 2.0;
        assert!((dilog(0.5).unwrap() - half).abs() <= 1e-15);
        assert!(dilog(1.5).is_err());
        assert!(dilog(-0.5).is_err());
    }

    #[test]
    fn dilog_matches_plain_series() {
        // direct 30-term sum at x = 0.5 agrees up to its truncation error
        let direct: f64 = (1..=30).map(|k| 0.5f64.powi(k) / f64::from(k * k)).sum();
        assert!((dilog(0.5).unwrap() - direct).abs() < 1e-11);
        // slowly convergent series near x = 0.9 with a long tail
        let direct: f64 = (1..=2000).map(|k| 0.9f64.powi(k) / f64::from(k * k)).sum();
        assert!((dilog(0.9).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn reflection_residual_grid() {
        for i in 1..100 {
            let x = f64::from(i) / 100.0;
            let r = dilog(x).unwrap() + dilog(1.0 - x).unwrap() - PI2_6 + x.ln() * (1.0 - x).ln();
            assert!(r.abs() <= 1e-13, "x = {x}: {r}");
        }
    }

    #[test]
    fn exp_neg_forms_agree() {
        for &y in &[1e-6f64, 0.01, 0.3, 0.69, 0.7, 2.0, 10.0] {
            let x = (-y).exp();
            assert!(
                (dilog_exp_neg(y) - dilog(x).unwrap()).abs() < 1e-13,
                "y = {y}"
            );
            assert!((li1_exp_neg(y) - li1(x).unwrap()).abs() < 1e-9 * li1_exp_neg(y));
            for r in 0..5 {
                let a = polylog_nonpos_exp_neg(r, y).unwrap();
                let b = polylog_nonpos(r, x).unwrap();
                assert!((a - b).abs() <= 1e-8 * a.abs(), "r = {r}, y = {y}");
            }
        }
    }

    #[test]
    fn nonpos_closed_forms() {
        assert!((polylog_nonpos(0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((polylog_nonpos(1, 0.5).unwrap() - 2.0).abs() < 1e-14);
        assert!((polylog_nonpos(2, 0.5).unwrap() - 6.0).abs() < 1e-14);
        // term-by-term oracles
        let s1: f64 = (1..200).map(|k| f64::from(k) * 0.5f64.powi(k)).sum();
        let s2: f64 = (1..200).map(|k| f64::from(k * k) * 0.5f64.powi(k)).sum();
        assert!((polylog_nonpos(1, 0.5).unwrap() - s1).abs() < 1e-13);
        assert!((polylog_nonpos(2, 0.5).unwrap() - s2).abs() < 1e-13);
        // Li_{-r}(1/2) = 2 * (ordered Bell number); r = 5 gives 2 * 541
        assert!((polylog_nonpos(5, 0.5).unwrap() - 1082.0).abs() < 1e-10);
        assert!(polylog_nonpos(1, 1.0).is_err());
        assert!(polylog_nonpos(POLYLOG_NONPOS_MAX + 1, 0.5).is_err());
    }

    #[test]
    fn derivative_ladder() {
        // x d/dx Li_{1-r}(x) = Li_{-r}(x)
        let h = 1e-6;
        for i in 1..10 {
            let x = f64::from(i) / 10.0;
            for r in 0..4i64 {
                let f = |z: f64| polylog_int(1 - r, z).unwrap();
                let d = x * (f(x + h) - f(x - h)) / (2.0 * h);
                let target = polylog_int(-r, x).unwrap();
                assert!(
                    (d - target).abs()
                        <= 1e-8
                            * target.abs().max(1.0)
                            * 100.0_f64.min(1.0 / (1.0 - x).powi(r as i32 + 2)).max(1.0),
                    "x = {x}, r = {r}: {d} vs {target}"
                );
            }
        }
    }

    #[test]
    fn shift_expansion() {
        let li2 = polylog_shift(2, 0.5, 0.0, 5).unwrap();
        assert_eq!(li2, dilog(0.5).unwrap());
        let a = polylog_shift(2, 0.5, -0.1, 20).unwrap();
        assert!((a - dilog(0.5 * (-0.1f64).exp()).unwrap()).abs() <= 1e-12);
        let b = polylog_shift(1, 0.3, 0.2, 20).unwrap();
        assert!((b + (1.0 - 0.3 * 0.2f64.exp()).ln()).abs() <= 1e-12);
        assert!(polylog_shift(2, 0.5, 0.8, 20).is_err());
        assert!(polylog_shift(3, 0.5, 0.1, 20).is_err());
    }
}
