//! q-Pochhammer symbols, the Eulerian series data model, and direct
//! evaluation of the series near `q = e^{-t} -> 1`.
//!
//! A series is described by `(A, B, v)` and a list of Pochhammer factors.
//! Its `m`-th summand is `exp(F(m, t))` with
//!
//! ```text
//! F(x, t) = x v - A x^2 t - B x t
//!         + sum_terms S sum_{k>=1} e^{-k(alpha x + gamma) t} / (k (1 - e^{-k beta t}))
//! ```
//!
//! which is `log(q^{A x^2 + B x} z^x / prod (q^{alpha x + gamma}; q^beta)_inf^S)`.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::logvalue::{KahanSum, LogSum, LogValue};
use crate::specfun::{bernoulli_f64, bernoulli_poly, ln_gamma_signed, BERNOULLI_MAX};

/// Largest `t` accepted by the series evaluators.
pub const T_MAX: f64 = 0.5;

/// Largest derivative order accepted by [`f_deriv`].
pub const MAX_DERIV_ORDER: usize = 64;

/// Relative cutoff for every truncated infinite sum.
const REL_CUTOFF: f64 = 1e-18;

/// `log(1e-18)`: factors `1 - x` with `x` below this are treated as 1.
const LOG_CUTOFF: f64 = -41.446_531_673_892_82;

/// One Pochhammer factor `(q^{alpha m + gamma}; q^beta)_inf^{-s}` of a summand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PochTerm {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub s: f64,
}

impl PochTerm {
    pub fn new(alpha: f64, beta: f64, gamma: f64, s: f64) -> Result<Self> {
        let t = PochTerm {
            alpha,
            beta,
            gamma,
            s,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.alpha, self.beta, self.gamma, self.s];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invariant("term fields must be finite".into()));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Invariant(format!(
                "alpha>0 violated (alpha = {})",
                self.alpha
            )));
        }
        if self.beta <= 0.0 {
            return Err(Error::Invariant(format!(
                "beta>0 violated (beta = {})",
                self.beta
            )));
        }
        if self.gamma <= 0.0 {
            return Err(Error::Invariant(format!(
                "gamma>0 violated (gamma = {})",
                self.gamma
            )));
        }
        if self.s == 0.0 {
            return Err(Error::Invariant("S!=0 violated".into()));
        }
        Ok(())
    }
}

/// Checks that `(A, v, B)` lies in `{A>0} u {A=0, v=0, B>0} u {A=0, v<0}`.
pub fn check_domain(a: f64, b: f64, v: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && v.is_finite()) {
        return Err(Error::Invariant("A, B, v must be finite".into()));
    }
    if a < 0.0 {
        return Err(Error::Invariant(format!("A>=0 violated (A = {a})")));
    }
    if a > 0.0 || v < 0.0 || (v == 0.0 && b > 0.0) {
        return Ok(());
    }
    Err(Error::Invariant(format!(
        "domain triple violated: need A>0, or A=0 and v<0, or A=0, v=0 and B>0 (A = {a}, v = {v}, B = {b})"
    )))
}

/// Canonical series `sum_m q^{A m^2 + B m} e^{v m} / prod (q^{alpha m + gamma}; q^beta)_inf^S`.
///
/// Terms are sorted by `(alpha, beta, gamma)`, and terms sharing all three
/// are merged by adding `S`. Terms whose merged `S` is zero are dropped, so
/// the list may end up empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    a: f64,
    b: f64,
    v: f64,
    terms: Vec<PochTerm>,
}

impl SeriesSpec {
    pub fn new(a: f64, b: f64, v: f64, terms: Vec<PochTerm>) -> Result<Self> {
        check_domain(a, b, v)?;
        for t in &terms {
            t.validate()?;
        }
        Ok(SeriesSpec {
            a,
            b,
            v,
            terms: merge_terms(terms),
        })
    }

    /// Coefficient of `m^2 t` in `-F`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Coefficient of `m t` in `-F`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// `log z`.
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn terms(&self) -> &[PochTerm] {
        &self.terms
    }

    pub fn min_alpha(&self) -> Option<f64> {
        self.terms.first().map(|t| t.alpha)
    }

    pub fn max_alpha(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.alpha).reduce(f64::max)
    }

    /// Same series with every `S`, `A` and `v` multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| PochTerm {
                s: t.s * lambda,
                ..*t
            })
            .collect();
        SeriesSpec::new(self.a * lambda, self.b, self.v * lambda, terms)
    }
}

fn merge_terms(terms: Vec<PochTerm>) -> Vec<PochTerm> {
    let mut order: Vec<(u64, u64, u64)> = Vec::new();
    let mut merged: HashMap<(u64, u64, u64), PochTerm> = HashMap::new();
    for t in terms {
        let key = (t.alpha.to_bits(), t.beta.to_bits(), t.gamma.to_bits());
        merged
            .entry(key)
            .and_modify(|m| m.s += t.s)
            .or_insert_with(|| {
                order.push(key);
                t
            });
    }
    let mut out: Vec<PochTerm> = order
        .into_iter()
        .map(|k| merged[&k])
        .filter(|t| t.s != 0.0)
        .collect();
    out.sort_by(|x, y| {
        x.alpha
            .total_cmp(&y.alpha)
            .then(x.beta.total_cmp(&y.beta))
            .then(x.gamma.total_cmp(&y.gamma))
    });
    out
}

/// Quadruple `(a, b, c, d)` with exponent `S`: the factor
/// `1 / (q^a; q^b)_{c m + d}^S` of a summand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTerm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub s: f64,
}

impl QuadTerm {
    pub fn new(a: f64, b: f64, c: f64, d: f64, s: f64) -> Result<Self> {
        let q = QuadTerm { a, b, c, d, s };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.a, self.b, self.c, self.d, self.s];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invariant("quad fields must be finite".into()));
        }
        if self.b <= 0.0 {
            return Err(Error::Invariant(format!("b>0 violated (b = {})", self.b)));
        }
        if self.c <= 0.0 {
            return Err(Error::Invariant(format!("c>0 violated (c = {})", self.c)));
        }
        if self.a + self.b * self.d <= 0.0 {
            return Err(Error::Invariant(format!(
                "a+bd>0 violated (a = {}, b = {}, d = {})",
                self.a, self.b, self.d
            )));
        }
        let r = self.a / self.b;
        if r <= 0.0 && r == r.round() {
            return Err(Error::Invariant(format!(
                "a/b not a nonpositive integer violated (a/b = {r})"
            )));
        }
        if self.s == 0.0 {
            return Err(Error::Invariant("S!=0 violated".into()));
        }
        Ok(())
    }
}

/// Series `sum_m q^{A m^2 + B m} e^{v m} / prod (q^a; q^b)_{c m + d}^S`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpec {
    a: f64,
    b: f64,
    v: f64,
    quads: Vec<QuadTerm>,
}

impl ProductSpec {
    pub fn new(a: f64, b: f64, v: f64, quads: Vec<QuadTerm>) -> Result<Self> {
        check_domain(a, b, v)?;
        if quads.is_empty() {
            return Err(Error::Invariant("quads must be nonempty".into()));
        }
        for q in &quads {
            q.validate()?;
        }
        Ok(ProductSpec { a, b, v, quads })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn quads(&self) -> &[QuadTerm] {
        &self.quads
    }
}

/// Splits `1/(q^a;q^b)_{cm+d}^S = (q^{bcm+a+bd};q^b)_inf^S / (q^a;q^b)_inf^S`.
///
/// Returns the canonical series (one term `alpha = bc, beta = b,
/// gamma = a + bd, S_term = -S` per quad) and the constant prefactor
/// `prod (q^a; q^b)_inf^{-S}` with quads merged on `(a, b)`. The prefactor's
/// quad list is empty when everything cancels.
pub fn normalize(spec: &ProductSpec) -> Result<(SeriesSpec, ProductSpec)> {
    let mut terms = Vec::with_capacity(spec.quads.len());
    for q in &spec.quads {
        q.validate()?;
        terms.push(PochTerm {
            alpha: q.b * q.c,
            beta: q.b,
            gamma: q.a + q.b * q.d,
            s: -q.s,
        });
    }
    let series = SeriesSpec::new(spec.a, spec.b, spec.v, terms)?;
    let prefactor = ProductSpec {
        a: spec.a,
        b: spec.b,
        v: spec.v,
        quads: merge_prefactor(&spec.quads),
    };
    Ok((series, prefactor))
}

fn merge_prefactor(quads: &[QuadTerm]) -> Vec<QuadTerm> {
    let mut out: Vec<QuadTerm> = Vec::new();
    for q in quads {
        match out
            .iter_mut()
            .find(|p| p.a.to_bits() == q.a.to_bits() && p.b.to_bits() == q.b.to_bits())
        {
            Some(p) => p.s += q.s,
            None => out.push(*q),
        }
    }
    out.retain(|q| q.s != 0.0);
    out
}

/// A full Eulerian series: `q^{q_power} * prefactor * series`, with the
/// prefactor `prod (q^a; q^b)_inf^{-S}` over `prefactor`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerianForm {
    pub series: SeriesSpec,
    pub prefactor: Vec<QuadTerm>,
    pub q_power: f64,
}

impl EulerianForm {
    pub fn from_product(spec: &ProductSpec) -> Result<Self> {
        let (series, pre) = normalize(spec)?;
        Ok(EulerianForm {
            series,
            prefactor: pre.quads,
            q_power: 0.0,
        })
    }

    /// Series with no prefactor.
    pub fn bare(series: SeriesSpec) -> Self {
        EulerianForm {
            series,
            prefactor: Vec::new(),
            q_power: 0.0,
        }
    }

    /// `q^{q_power}` times the exact prefactor product.
    pub fn outer_factor(&self, t: f64) -> Result<LogValue> {
        let pre = prefactor_exact(&self.prefactor, t)?;
        Ok(pre * LogValue::from_log(-self.q_power * t))
    }

    /// The whole value by direct summation.
    pub fn sum_total(&self, t: f64) -> Result<LogValue> {
        Ok(series_sum(&self.series, t)? * self.outer_factor(t)?)
    }
}

/// `log(1 - e^y)` with its sign, for `y != 0`.
fn log_one_minus_exp(y: f64) -> Result<(i8, f64)> {
    if y < 0.0 {
        Ok((1, (-y.exp_m1()).ln()))
    } else if y > 0.0 {
        Ok((-1, y.exp_m1().ln()))
    } else {
        Err(Error::Pole {
            func: "qpoch",
            at: 1.0,
        })
    }
}

/// `(a; q)_m = prod_{k<m} (1 - a q^k)` in log space.
pub fn qpoch_finite(a: f64, q: f64, m: usize) -> Result<LogValue> {
    if !(a > 0.0) || !(q > 0.0 && q < 1.0) {
        return Err(domain(
            "qpoch_finite",
            format!("need a > 0 and 0 < q < 1, got a = {a}, q = {q}"),
        ));
    }
    let (la, lq) = (a.ln(), q.ln());
    let mut sign = 1i8;
    let mut acc = KahanSum::default();
    for k in 0..m {
        let (s, l) = log_one_minus_exp(la + k as f64 * lq)?;
        sign *= s;
        acc.push(l);
    }
    Ok(LogValue::new(sign, acc.value()))
}

/// `(a; q)_inf` with a bound on the truncation error of its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PochInf {
    pub value: LogValue,
    pub error_bound: f64,
}

/// `(e^{la}; e^{lq})_inf` for `lq < 0`, any real `la` off the poles.
pub fn log_qpoch_inf(la: f64, lq: f64) -> Result<PochInf> {
    if !(lq < -1e-12) {
        return Err(Error::NonConvergence {
            func: "qpoch_inf",
            detail: format!("q = e^{lq} too close to 1; use the asymptotic form"),
        });
    }
    let mut sign = 1i8;
    let mut acc = KahanSum::default();
    let mut k = 0u64;
    loop {
        let y = la + k as f64 * lq;
        if y < LOG_CUTOFF {
            let error_bound = 2.0 * y.exp() / (-lq.exp_m1());
            return Ok(PochInf {
                value: LogValue::new(sign, acc.value()),
                error_bound,
            });
        }
        let (s, l) = log_one_minus_exp(y)?;
        sign *= s;
        acc.push(l);
        k += 1;
    }
}

/// `(a; q)_inf` for `0 < a`, `0 < q < 1`.
pub fn qpoch_inf(a: f64, q: f64) -> Result<LogValue> {
    qpoch_inf_detailed(a, q).map(|p| p.value)
}

pub fn qpoch_inf_detailed(a: f64, q: f64) -> Result<PochInf> {
    if !(a > 0.0) || !(q > 0.0 && q < 1.0) {
        return Err(domain(
            "qpoch_inf",
            format!("need a > 0 and 0 < q < 1, got a = {a}, q = {q}"),
        ));
    }
    if q >= 1.0 - 1e-12 {
        return Err(Error::NonConvergence {
            func: "qpoch_inf",
            detail: format!("q = {q} too close to 1; use the asymptotic form"),
        });
    }
    log_qpoch_inf(a.ln(), q.ln())
}

/// Asymptotic `log (e^{-at}; e^{-bt})_inf` as `t -> 0+`, through order `t^M`:
///
/// ```text
/// -pi^2/(6bt) + (1/2 - a/b) log(bt) + log(sqrt(2 pi)/Gamma(a/b))
///   - sum_{l=1}^{M} b^l B_l B_{l+1}(a/b) t^l / (l (l+1)!)
/// ```
///
/// The sign of the result is the sign of `Gamma(a/b)`.
pub fn mcintosh_asym(a: f64, b: f64, t: f64, m: usize) -> Result<LogValue> {
    if !(b > 0.0) || !(t > 0.0) {
        return Err(domain(
            "mcintosh_asym",
            format!("need b > 0, t > 0 (b = {b}, t = {t})"),
        ));
    }
    if b * t >= 2.0 * PI {
        return Err(domain(
            "mcintosh_asym",
            format!("b t = {} not below 2 pi", b * t),
        ));
    }
    if m + 1 > BERNOULLI_MAX {
        return Err(Error::IndexOverflow {
            index: m,
            max: BERNOULLI_MAX - 1,
        });
    }
    let r = a / b;
    let (g_sign, lg) = ln_gamma_signed(r).map_err(|_| {
        domain(
            "mcintosh_asym",
            format!("Gamma(a/b) has a pole at a/b = {r}"),
        )
    })?;
    let mut acc = KahanSum::default();
    acc.push(-PI * PI / (6.0 * b * t));
    acc.push((0.5 - r) * (b * t).ln());
    acc.push(0.5 * (2.0 * PI).ln() - lg);
    acc.push(-mcintosh_tail(r, b * t, m)?);
    Ok(LogValue::new(g_sign as i8, acc.value()))
}

/// `sum_{l=1}^{M} B_l B_{l+1}(r) s^l / (l (l+1)!)` with `s = b t`.
fn mcintosh_tail(r: f64, s: f64, m: usize) -> Result<f64> {
    let mut sum = 0.0;
    let mut fact = 1.0; // (l+1)!
    for l in 1..=m {
        fact *= (l + 1) as f64;
        let bl = bernoulli_f64(l)?;
        if bl == 0.0 {
            continue;
        }
        sum += bl * bernoulli_poly(l + 1, r)? * s.powi(l as i32) / (l as f64 * fact);
    }
    Ok(sum)
}

/// Constants of `prod (q^a; q^b)_inf^{-S} ~ sign C t^{B_H} exp(A_H / t + sum A_l t^l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorConstants {
    pub a_h: f64,
    pub b_h: f64,
    pub log_c_h: f64,
    pub sign: i8,
    /// `a_ell[l - 1] = A_l`.
    pub a_ell: Vec<f64>,
}

impl PrefactorConstants {
    pub fn eval(&self, t: f64) -> LogValue {
        let mut acc = KahanSum::default();
        acc.push(self.log_c_h);
        acc.push(self.b_h * t.ln());
        acc.push(self.a_h / t);
        let mut tp = 1.0;
        for a in &self.a_ell {
            tp *= t;
            acc.push(a * tp);
        }
        LogValue::new(self.sign, acc.value())
    }
}

pub fn prefactor_constants(quads: &[QuadTerm], m: usize) -> Result<PrefactorConstants> {
    if m + 1 > BERNOULLI_MAX {
        return Err(Error::IndexOverflow {
            index: m,
            max: BERNOULLI_MAX - 1,
        });
    }
    let mut a_h = 0.0;
    let mut b_h = 0.0;
    let mut log_c = KahanSum::default();
    let mut sign = 1i8;
    let mut a_ell = vec![0.0; m];
    for q in merge_prefactor(quads) {
        let r = q.a / q.b;
        let (g_sign, lg) = ln_gamma_signed(r)?;
        if g_sign < 0.0 {
            sign *= integer_power_sign(q.s)?;
        }
        a_h += PI * PI * q.s / (6.0 * q.b);
        b_h += (r - 0.5) * q.s;
        log_c.push(q.s * (lg + (r - 0.5) * q.b.ln() - 0.5 * (2.0 * PI).ln()));
        let mut fact = 1.0;
        for (i, slot) in a_ell.iter_mut().enumerate() {
            let l = i + 1;
            fact *= (l + 1) as f64;
            let bl = bernoulli_f64(l)?;
            if bl != 0.0 {
                *slot +=
                    bl * q.s * q.b.powi(l as i32) * bernoulli_poly(l + 1, r)? / (l as f64 * fact);
            }
        }
    }
    Ok(PrefactorConstants {
        a_h,
        b_h,
        log_c_h: log_c.value(),
        sign,
        a_ell,
    })
}

fn integer_power_sign(s: f64) -> Result<i8> {
    if s != s.round() {
        return Err(Error::Sign(format!(
            "negative Pochhammer product raised to non-integer power {s}"
        )));
    }
    Ok(if (s.abs() % 2.0) == 1.0 { -1 } else { 1 })
}

/// Asymptotic value of the constant prefactor `prod (q^a; q^b)_inf^{-S}`.
pub fn prefactor_asym(spec: &ProductSpec, t: f64, m: usize) -> Result<LogValue> {
    if !(t > 0.0) {
        return Err(domain(
            "prefactor_asym",
            format!("t = {t} must be positive"),
        ));
    }
    for q in &spec.quads {
        if q.b * t >= 2.0 * PI {
            return Err(domain(
                "prefactor_asym",
                format!("b t = {} not below 2 pi", q.b * t),
            ));
        }
    }
    Ok(prefactor_constants(&spec.quads, m)?.eval(t))
}

/// `prod (e^{-at}; e^{-bt})_inf^{-S}` by direct products.
pub fn prefactor_exact(quads: &[QuadTerm], t: f64) -> Result<LogValue> {
    let mut out = LogValue::ONE;
    for q in merge_prefactor(quads) {
        let p = log_qpoch_inf(-q.a * t, -q.b * t)?.value;
        let sign = if p.sign < 0 {
            integer_power_sign(q.s)?
        } else {
            1
        };
        out = out * LogValue::new(sign, -q.s * p.log_abs);
    }
    Ok(out)
}

fn check_t(func: &'static str, t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(domain(func, format!("t = {t} must be positive")));
    }
    if t >= T_MAX {
        return Err(Error::NonConvergence {
            func,
            detail: format!("t = {t} not below t_max = {T_MAX}"),
        });
    }
    Ok(())
}

/// `sum_{k>=1} (-k alpha t)^n e^{-k c} / (k (1 - e^{-k beta t}))`.
///
/// The summand magnitude peaks near `k = n / c`; past that point it decays
/// monotonically, so the sum stops once a term drops below `1e-18` of the
/// partial sum.
fn inner_sum(n: usize, c: f64, alpha_t: f64, beta_t: f64) -> Result<f64> {
    let k_peak = if n == 0 { 0.0 } else { n as f64 / c };
    let log_at = alpha_t.ln();
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let mut acc = KahanSum::default();
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        let log_mag =
            -kf * c + n as f64 * (kf.ln() + log_at) - kf.ln() - (-(-kf * beta_t).exp_m1()).ln();
        let term = log_mag.exp();
        acc.push(term);
        if kf > k_peak && term <= REL_CUTOFF * acc.value().abs() {
            break;
        }
        k += 1;
        if k > 100_000_000 {
            return Err(Error::NonConvergence {
                func: "F_eval",
                detail: format!("inner sum with c = {c} did not settle"),
            });
        }
    }
    Ok(sign * acc.value())
}

/// `F(x, t)`, the log of the `x`-th summand extended to real `x >= 0`.
pub fn f_eval(spec: &SeriesSpec, x: f64, t: f64) -> Result<f64> {
    check_t("F_eval", t)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(
            "F_eval",
            format!("x = {x} must be a finite nonnegative real"),
        ));
    }
    let mut acc = KahanSum::default();
    acc.push(x * spec.v);
    acc.push(-spec.a * x * x * t);
    acc.push(-spec.b * x * t);
    for term in &spec.terms {
        let c = (term.alpha * x + term.gamma) * t;
        acc.push(term.s * inner_sum(0, c, term.alpha * t, term.beta * t)?);
    }
    Ok(acc.value())
}

/// `d^n F / dx^n` at `(x, t)`.
pub fn f_deriv(spec: &SeriesSpec, n: usize, x: f64, t: f64) -> Result<f64> {
    check_t("F_deriv", t)?;
    if n == 0 || n > MAX_DERIV_ORDER {
        return Err(Error::IndexOverflow {
            index: n,
            max: MAX_DERIV_ORDER,
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "F_deriv",
            format!("x = {x} must be a finite positive real"),
        ));
    }
    let mut acc = KahanSum::default();
    match n {
        1 => acc.push(spec.v - 2.0 * spec.a * x * t - spec.b * t),
        2 => acc.push(-2.0 * spec.a * t),
        _ => {}
    }
    for term in &spec.terms {
        let c = (term.alpha * x + term.gamma) * t;
        acc.push(term.s * inner_sum(n, c, term.alpha * t, term.beta * t)?);
    }
    Ok(acc.value())
}

/// Truncation controls for [`series_sum_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumOptions {
    /// A term is small when below this fraction of the running sum.
    pub rel_threshold: f64,
    /// Number of consecutive small terms required before stopping.
    pub small_run: usize,
    /// Multiplier on the index scale `u_stop` that must be passed first.
    pub stop_scale: f64,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            rel_threshold: 1e-18,
            small_run: 50,
            stop_scale: 1.0,
        }
    }
}

impl SumOptions {
    /// Twice as conservative in every threshold.
    pub fn doubled(self) -> Self {
        SumOptions {
            rel_threshold: self.rel_threshold / 2.0,
            small_run: self.small_run * 2,
            stop_scale: self.stop_scale * 2.0,
        }
    }
}

/// Scale in `u = m t` past which the summand is past its peak and into
/// its decaying tail.
fn stop_scale(spec: &SeriesSpec, t: f64) -> f64 {
    let pf = crate::phase::build_phase(spec);
    let peak = crate::phase::stationary_points(&pf)
        .ok()
        .and_then(|sps| sps.iter().map(|s| s.u).reduce(f64::max))
        .unwrap_or(1.0);
    let min_alpha = spec.min_alpha().unwrap_or(1.0);
    2.0 * peak + 10.0 * t.ln().abs() / min_alpha
}

/// `sum_{m>=0} exp(F(m, t))`.
pub fn series_sum(spec: &SeriesSpec, t: f64) -> Result<LogValue> {
    series_sum_with(spec, t, &SumOptions::default())
}

pub fn series_sum_with(spec: &SeriesSpec, t: f64, opts: &SumOptions) -> Result<LogValue> {
    check_t("series_sum", t)?;
    let u_stop = opts.stop_scale * stop_scale(spec, t);
    let log_rel = opts.rel_threshold.ln();
    let mut sum = LogSum::new();
    let mut small = 0usize;
    let mut growing = 0usize;
    let mut m = 0u64;
    loop {
        let lt = f_eval(spec, m as f64, t)?;
        let past = m as f64 * t > u_stop;
        if past && lt >= sum.max() {
            growing += 1;
            if growing >= 1000 {
                return Err(Error::NonConvergence {
                    func: "series_sum",
                    detail: format!("terms still growing at m = {m}; domain triple violated?"),
                });
            }
        } else {
            growing = 0;
        }
        sum.push(lt);
        if lt < sum.log() + log_rel {
            small += 1;
        } else {
            small = 0;
        }
        if small >= opts.small_run && past {
            break;
        }
        m += 1;
        if m > 50_000_000 {
            return Err(Error::NonConvergence {
                func: "series_sum",
                detail: "more than 5e7 terms needed".into(),
            });
        }
    }
    Ok(LogValue::from_log(sum.log()))
}
