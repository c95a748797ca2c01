//! Bernoulli numbers and polynomials.
//!
//! Values are produced by the exact recurrence `sum_{k=0}^{n} C(n+1,k) B_k = 0`
//! over arbitrary-precision rationals and rounded to `f64` once. The
//! alternating, factorially growing tail of the sequence makes any
//! floating-point recurrence useless past n ~ 20.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// The denominator is positive and the fraction is kept in lowest terms.
pub type Rational = BigRational;

/// Largest index held by the Bernoulli table.
pub const BERNOULLI_MAX: usize = 64;

/// Exact Bernoulli numbers `B_0..=B_N` with `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<Rational>,
    floats: Vec<f64>,
    /// `poly[n][j]` is the rounded coefficient of `x^j` in `B_n(x)`.
    poly: Vec<Vec<f64>>,
}

impl BernoulliTable {
    pub fn new(max: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(max + 1);
        values.push(Rational::one());
        for n in 1..=max {
            // B_n = -1/(n+1) * sum_{k<n} C(n+1,k) B_k
            let mut acc = Rational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in values.iter().enumerate() {
                if !bk.is_zero() {
                    acc += bk * Rational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            values.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
        }

        let floats = values.iter().map(rational_to_f64).collect();

        let mut poly = Vec::with_capacity(max + 1);
        for n in 0..=max {
            let mut coeffs = vec![0.0; n + 1];
            let mut binom = BigInt::one();
            for (k, bk) in values.iter().enumerate().take(n + 1) {
                // term C(n,k) B_k x^{n-k}
                let exact = bk * Rational::from_integer(binom.clone());
                coeffs[n - k] = rational_to_f64(&exact);
                binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
            }
            poly.push(coeffs);
        }

        BernoulliTable {
            values,
            floats,
            poly,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    fn check(&self, n: usize) -> Result<()> {
        if n >= self.values.len() {
            return Err(Error::IndexOverflow {
                index: n,
                max: self.values.len() - 1,
            });
        }
        Ok(())
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

static TABLE: LazyLock<BernoulliTable> = LazyLock::new(|| BernoulliTable::new(BERNOULLI_MAX));

pub(crate) fn table() -> &'static BernoulliTable {
    &TABLE
}

/// Exact Bernoulli number `B_n`.
pub fn bernoulli_number(n: usize) -> Result<Rational> {
    let t = table();
    t.check(n)?;
    Ok(t.values[n].clone())
}

/// `B_n` rounded to the nearest double.
pub fn bernoulli_f64(n: usize) -> Result<f64> {
    let t = table();
    t.check(n)?;
    Ok(t.floats[n])
}

/// Bernoulli polynomial `B_n(x)` from its exact coefficients.
pub fn bernoulli_poly(n: usize, x: f64) -> Result<f64> {
    let t = table();
    t.check(n)?;
    Ok(t.poly[n].iter().rev().fold(0.0, |acc, &c| acc * x + c))
}
