//! Sign plus log-magnitude representation of real numbers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as `sign * exp(log_abs)`.
///
/// Series values such as `exp(pi^2 / (5t))` leave the binary64 range for
/// small `t`; keeping the logarithm avoids that. When `sign == 0` the value
/// is zero and `log_abs` is `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub sign: i8,
    pub log_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        log_abs: 0.0,
    };

    /// Builds a value from its sign and log-magnitude. A zero sign or a
    /// `-inf` magnitude both give `ZERO`.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    /// Positive number `exp(log_abs)`.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(1, log_abs)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                log_abs: x.abs().ln(),
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.log_abs)
    }

    /// `self^p` for a positive base, or any base when `p` is an integer.
    pub fn powf(self, p: f64) -> Option<Self> {
        match self.sign {
            0 if p > 0.0 => Some(Self::ZERO),
            0 => None,
            1 => Some(Self::from_log(self.log_abs * p)),
            _ if p == p.round() => {
                let odd = (p.abs() % 2.0) == 1.0;
                Some(Self::new(if odd { -1 } else { 1 }, self.log_abs * p))
            }
            _ => None,
        }
    }

    /// Natural log of the magnitude ratio `|self| / |other|`.
    pub fn log_ratio(self, other: LogValue) -> f64 {
        self.log_abs - other.log_abs
    }

    /// `|self / other - 1|` computed without leaving log space when the two
    /// values share a sign.
    pub fn rel_diff(self, other: LogValue) -> f64 {
        if self.sign == other.sign && self.sign != 0 {
            (self.log_abs - other.log_abs).exp_m1().abs()
        } else if self.sign == 0 && other.sign == 0 {
            0.0
        } else {
            (self / other).to_f64().sub(1.0).abs()
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "exp({})", self.log_abs),
            _ => write!(f, "-exp({})", self.log_abs),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        Self::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        if rhs.sign == 0 {
            return Self::new(self.sign, f64::NAN);
        }
        Self::new(self.sign * rhs.sign, self.log_abs - rhs.log_abs)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        Self::new(-self.sign, self.log_abs)
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = match self.log_abs.partial_cmp(&rhs.log_abs) {
            Some(Ordering::Less) => (rhs, self),
            _ => (self, rhs),
        };
        let d = small.log_abs - big.log_abs;
        if big.sign == small.sign {
            Self::new(big.sign, big.log_abs + d.exp().ln_1p())
        } else if d == 0.0 {
            Self::ZERO
        } else {
            // |big| - |small| = |big| (1 - e^d), d < 0
            Self::new(big.sign, big.log_abs + (-d.exp_m1()).ln())
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

/// Running sum of positive terms given by their logarithms.
///
/// Terms are rescaled against the largest log seen so far; the scaled sum
/// uses Neumaier compensation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    max: f64,
    sum: f64,
    comp: f64,
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn push(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.max {
            let scale = (self.max - log_term).exp();
            self.sum *= scale;
            self.comp *= scale;
            self.max = log_term;
        }
        let x = (log_term - self.max).exp();
        let s = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - s) + x;
        } else {
            self.comp += (x - s) + self.sum;
        }
        self.sum = s;
    }

    pub fn log(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.max + (self.sum + self.comp).ln()
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

/// Neumaier-compensated sum of plain floats.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn push(&mut self, x: f64) {
        let s = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - s) + x;
        } else {
            self.comp += (x - s) + self.sum;
        }
        self.sum = s;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for &x in &[1.0, -2.5, 1e-300, -3e200, 0.0] {
            let v = LogValue::from_f64(x);
            assert!((v.to_f64() - x).abs() <= 1e-12 * x.abs());
            if x != 0.0 {
                let back = LogValue::from_f64(v.to_f64());
                assert!((back.log_abs - v.log_abs).abs() <= 1e-12);
            }
        }
        assert_eq!(LogValue::from_f64(0.0), LogValue::ZERO);
    }

    #[test]
    fn arithmetic() {
        let a = LogValue::from_f64(3.0);
        let b = LogValue::from_f64(-5.0);
        assert!(((a * b).to_f64() + 15.0).abs() < 1e-13);
        assert!(((a + b).to_f64() + 2.0).abs() < 1e-14);
        assert!(((a - b).to_f64() - 8.0).abs() < 1e-14);
        assert!(((b / a).to_f64() + 5.0 / 3.0).abs() < 1e-15);
        assert!((a - a).is_zero());
        assert_eq!(a + LogValue::ZERO, a);
    }

    #[test]
    fn beyond_double_range() {
        let big = LogValue::from_log(1000.0);
        let s = big + big;
        assert!((s.log_abs - 1000.0 - 2f64.ln()).abs() < 1e-13);
        let d = LogValue::from_log(1000.0) - LogValue::from_log(999.0);
        assert!((d.log_abs - 1000.0 - (1.0 - (-1f64).exp()).ln()).abs() < 1e-12);
    }

    #[test]
    fn powers() {
        let m = LogValue::from_f64(-2.0);
        assert!((m.powf(3.0).unwrap().to_f64() + 8.0).abs() < 1e-13);
        assert!((m.powf(-2.0).unwrap().to_f64() - 0.25).abs() < 1e-15);
        assert!(m.powf(0.5).is_none());
    }

    #[test]
    fn log_sum_matches_direct() {
        let mut s = LogSum::new();
        let mut direct = 0.0;
        for k in 0..100 {
            let l = -0.1 * f64::from(k) + (f64::from(k) * 0.3).sin();
            s.push(l);
            direct += l.exp();
        }
        assert!((s.log() - f64::ln(direct)).abs() < 1e-14);
    }
}
