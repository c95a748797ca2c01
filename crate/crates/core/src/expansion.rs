//! Laplace expansion at each stationary point, the leading tail term, and
//! assembly of the full asymptotic value.
//!
//! Around a maximum `u` of order `k` put `x = u/t + y / V` with
//! `V = (-F^{(2k)}(u/t) / (2k)!)^{1/(2k)}`. Then
//!
//! ```text
//! F(x) - F(u/t) = -y^{2k} + sum_{r != 2k} lambda_r y^r,
//! lambda_r = F^{(r)}(u/t) / (r! V^r)
//! ```
//!
//! and with `exp(sum lambda_r y^r) = sum kappa_n y^n` the peak contributes
//! `e^{F(u/t)} / V * sum_l Gamma((2l+1)/(2k)) kappa_{2l} / k`.
//!
//! Since `lambda_r` is of size `t^{r/2 - 1}` when `k = 1` (in general
//! `kappa_{2l}` is of size `t^{l/(k(2k+1))}`), a correction of order `t^L` needs
//! `kappa_n` up to `n = 2 L k (2k+1)`. The `L` argument below counts
//! orders of `t`, not `kappa` indices.

use std::fmt;

use crate::error::{Error, Result};
use crate::logvalue::LogValue;
use crate::phase::{
    build_phase, check_hypothesis, h, laplace_constant, stationary_points, PhaseFamily,
    StationaryPoint,
};
use crate::qseries::{
    f_deriv, f_eval, prefactor_constants, EulerianForm, PrefactorConstants, ProductSpec, SeriesSpec,
};
use crate::specfun::{gamma_fn, ln_gamma};

/// Default correction order in `t`.
pub const DEFAULT_L: usize = 2;
/// Default prefactor order in `t`.
pub const DEFAULT_M: usize = 8;

/// Laplace data at one stationary point for one `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionSeries {
    pub u: f64,
    pub k_u: usize,
    /// Peak-width normaliser `V(u, t)`.
    pub v: f64,
    /// `F(u/t, t)`.
    pub log_peak: f64,
    /// `lambda_r` at index `r`; entries `0` and `2 k_u` are zero.
    pub lambdas: Vec<f64>,
    /// `kappa_0, kappa_2, ..., kappa_{2 n}`.
    pub kappas: Vec<f64>,
}

/// Coefficients `b_0..=b_n` of `exp(sum_{r>=1} a_r y^r)`, from
/// `n b_n = sum_{k=1}^{n} k a_k b_{n-k}`. `a[0]` is ignored.
pub fn exp_series(a: &[f64], n: usize) -> Vec<f64> {
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for m in 1..=n {
        let mut s = 0.0;
        for k in 1..=m.min(a.len().saturating_sub(1)) {
            s += k as f64 * a[k] * b[m - k];
        }
        b[m] = s / m as f64;
    }
    b
}

/// Coefficient of `y^n` in `exp(sum_{r>=1} a_r y^r)` by summing
/// `prod a_r^{l_r} / l_r!` over all `l` with `sum r l_r = n`.
pub fn kappa_by_partitions(a: &[f64], n: usize) -> f64 {
    fn rec(a: &[f64], r: usize, rem: usize) -> f64 {
        if rem == 0 {
            return 1.0;
        }
        if r == 0 {
            return 0.0;
        }
        let ar = a.get(r).copied().unwrap_or(0.0);
        let mut s = 0.0;
        let mut pow = 1.0;
        let mut j = 0;
        while j * r <= rem {
            if j > 0 {
                pow *= ar / j as f64;
            }
            if pow == 0.0 && j > 0 {
                break;
            }
            s += pow * rec(a, r - 1, rem - j * r);
            j += 1;
        }
        s
    }
    rec(a, n, n)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Number of `kappa` indices needed for order `t^l` at a point of order `k`.
pub fn kappa_index_max(k_u: usize, l: usize) -> usize {
    2 * l * k_u * (2 * k_u + 1)
}

/// `V`, `lambda_r` and `kappa_{2l}` at `sp` for correction order `l` in `t`.
pub fn corrections(
    spec: &SeriesSpec,
    sp: &StationaryPoint,
    t: f64,
    l: usize,
) -> Result<CorrectionSeries> {
    let k = sp.order;
    let x = sp.u / t;
    let d2k = f_deriv(spec, 2 * k, x, t)?;
    if !(d2k < 0.0) {
        return Err(Error::Sign(format!(
            "F^({}) = {d2k} at x = {x} is not negative; t = {t} too large",
            2 * k
        )));
    }
    let v = (-d2k / factorial(2 * k)).powf(1.0 / (2 * k) as f64);
    let n = kappa_index_max(k, l);
    let mut lambdas = vec![0.0; n + 1];
    for (r, slot) in lambdas.iter_mut().enumerate().skip(1) {
        if r != 2 * k {
            *slot = f_deriv(spec, r, x, t)? / (factorial(r) * v.powi(r as i32));
        }
    }
    let b = exp_series(&lambdas, n);
    let kappas = b.iter().step_by(2).copied().collect();
    Ok(CorrectionSeries {
        u: sp.u,
        k_u: k,
        v,
        log_peak: f_eval(spec, x, t)?,
        lambdas,
        kappas,
    })
}

impl CorrectionSeries {
    /// `e^{F} / V * sum_l Gamma((2l+1)/(2k)) kappa_{2l} / k`.
    pub fn value(&self) -> Result<LogValue> {
        let k = self.k_u as f64;
        let mut s = 0.0;
        for (i, kap) in self.kappas.iter().enumerate() {
            s += gamma_fn((2 * i + 1) as f64 / (2.0 * k))? * kap / k;
        }
        Ok(LogValue::from_f64(s) * LogValue::from_log(self.log_peak - self.v.ln()))
    }
}

/// Contribution of one stationary point to the series.
pub fn peak_value(spec: &SeriesSpec, sp: &StationaryPoint, t: f64, l: usize) -> Result<LogValue> {
    corrections(spec, sp, t, l)?.value()
}

/// `(C_u, t_power, rate)` of `C_u t^{-1 + 1/(2m)} e^{H_{-1}(u)/t}`.
pub fn leading_constant(pf: &PhaseFamily, sp: &StationaryPoint) -> Result<(f64, f64, f64)> {
    let c_u = laplace_constant(pf, sp.u, sp.order, sp.h2m)?;
    Ok((c_u, -1.0 + 1.0 / (2 * sp.order) as f64, h(pf, -1, sp.u)?))
}

/// Whether the tail term is present: `A = v = 0` (so `B > 0`) and `f(alpha_1) > 0`.
pub fn tail_applies(pf: &PhaseFamily) -> bool {
    let spec = pf.spec();
    spec.a() == 0.0
        && spec.v() == 0.0
        && spec.b() > 0.0
        && pf.falpha().first().is_some_and(|&(_, f)| f > 0.0)
}

/// `(log constant, t_power)` of the leading tail term.
fn tail_form(pf: &PhaseFamily) -> Result<(f64, f64)> {
    if !tail_applies(pf) {
        let spec = pf.spec();
        return Err(Error::Branch(format!(
            "tail term needs A = 0, v = 0, B > 0 and f(alpha_1) > 0 (A = {}, v = {}, B = {}, f = {:?})",
            spec.a(),
            spec.v(),
            spec.b(),
            pf.falpha().first().map(|p| p.1)
        )));
    }
    let (a1, f1) = pf.falpha()[0];
    let r = pf.spec().b() / a1;
    Ok((ln_gamma(r)? - a1.ln() - r * f1.ln(), r - 1.0))
}

/// `Gamma(B/alpha_1) / (alpha_1 f(alpha_1)^{B/alpha_1}) t^{B/alpha_1 - 1}`.
pub fn tail_leading(pf: &PhaseFamily, t: f64) -> Result<LogValue> {
    let (c, p) = tail_form(pf)?;
    Ok(LogValue::from_log(c + p * t.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Peak,
    Tail,
    PeaksAndTail,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Peak => "peak",
            Branch::Tail => "tail",
            Branch::PeaksAndTail => "sum-of-peaks+tail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComponentKind {
    Peak { u: f64, order: usize },
    Tail,
}

/// One additive part of the series asymptotic, before the prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub kind: ComponentKind,
    pub rate: f64,
    pub t_power: f64,
    pub log_constant: f64,
    /// Value including all computed corrections.
    pub value: LogValue,
}

impl Component {
    fn leading_log(&self, t: f64) -> f64 {
        self.log_constant + self.t_power * t.ln() + self.rate / t
    }
}

/// `sign * exp(log_constant) * t^{t_power} * e^{rate/t} * correction_factor`.
///
/// The leading form is that of the dominant component times the prefactor
/// asymptotic; `correction_factor` carries everything else (Laplace
/// corrections, other components, prefactor `A_l` terms, any `q` power).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticResult {
    pub t: f64,
    pub rate: f64,
    pub t_power: f64,
    pub log_constant: f64,
    pub correction_factor: f64,
    pub sign: i8,
    pub branch: Branch,
    pub components: Vec<Component>,
    pub prefactor: PrefactorConstants,
}

impl AsymptoticResult {
    pub fn log_leading(&self) -> f64 {
        self.log_constant + self.t_power * self.t.ln() + self.rate / self.t
    }

    pub fn value(&self) -> LogValue {
        LogValue::new(self.sign, self.log_leading() + self.correction_factor.ln())
    }
}

/// Asymptotic value of a product-form series.
pub fn asym_total(product: &ProductSpec, t: f64, l: usize, m: usize) -> Result<AsymptoticResult> {
    asym_form(&EulerianForm::from_product(product)?, t, l, m)
}

/// Asymptotic value of `q^{q_power} * prefactor * series`.
pub fn asym_form(form: &EulerianForm, t: f64, l: usize, m: usize) -> Result<AsymptoticResult> {
    let spec = &form.series;
    let pf = build_phase(spec);
    let hyp = check_hypothesis(&pf);
    if !hyp.holds {
        return Err(Error::Hypothesis(hyp.diagnostic));
    }
    let mut components = Vec::new();
    for sp in stationary_points(&pf)? {
        let (c_u, t_power, rate) = leading_constant(&pf, &sp)?;
        components.push(Component {
            kind: ComponentKind::Peak {
                u: sp.u,
                order: sp.order,
            },
            rate,
            t_power,
            log_constant: c_u.ln(),
            value: peak_value(spec, &sp, t, l)?,
        });
    }
    let n_peaks = components.len();
    if tail_applies(&pf) {
        let (c, p) = tail_form(&pf)?;
        components.push(Component {
            kind: ComponentKind::Tail,
            rate: 0.0,
            t_power: p,
            log_constant: c,
            value: tail_leading(&pf, t)?,
        });
    }
    let branch = match (n_peaks, components.len() - n_peaks) {
        (0, 0) => {
            return Err(Error::Branch(
                "no interior maximum and no tail term: nothing to expand".into(),
            ))
        }
        (_, 0) => Branch::Peak,
        (0, _) => Branch::Tail,
        _ => Branch::PeaksAndTail,
    };
    let dominant = *components
        .iter()
        .max_by(|a, b| {
            let close = (a.rate - b.rate).abs() <= 1e-12 * a.rate.abs().max(b.rate.abs()).max(1.0);
            if close {
                a.leading_log(t).total_cmp(&b.leading_log(t))
            } else {
                a.rate.total_cmp(&b.rate)
            }
        })
        .expect("at least one component");

    let pc = prefactor_constants(&form.prefactor, m)?;
    let inner = components
        .iter()
        .fold(LogValue::ZERO, |acc, c| acc + c.value);
    let total = inner * pc.eval(t) * LogValue::from_log(-form.q_power * t);

    let rate = dominant.rate + pc.a_h;
    let t_power = dominant.t_power + pc.b_h;
    let log_constant = dominant.log_constant + pc.log_c_h;
    let leading = log_constant + t_power * t.ln() + rate / t;
    Ok(AsymptoticResult {
        t,
        rate,
        t_power,
        log_constant,
        correction_factor: (total.log_abs - leading).exp(),
        sign: total.sign,
        branch,
        components,
        prefactor: pc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{series_sum, PochTerm, QuadTerm};
    use std::f64::consts::PI;

    fn ramanujan() -> SeriesSpec {
        SeriesSpec::new(
            0.5,
            0.5,
            0.0,
            vec![PochTerm::new(1.0, 1.0, 1.0, -2.0).unwrap()],
        )
        .unwrap()
    }

    fn euler(b: f64) -> SeriesSpec {
        SeriesSpec::new(
            0.0,
            b,
            0.0,
            vec![PochTerm::new(1.0, 1.0, 1.0, -1.0).unwrap()],
        )
        .unwrap()
    }

    fn point(spec: &SeriesSpec) -> StationaryPoint {
        stationary_points(&build_phase(spec)).unwrap()[0]
    }

    #[test]
    fn exp_series_known() {
        // exp(y) = sum y^n / n!
        let b = exp_series(&[0.0, 1.0], 6);
        for (n, v) in b.iter().enumerate() {
            assert!((v - 1.0 / factorial(n)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_order_is_one() {
        let spec = ramanujan();
        let c = corrections(&spec, &point(&spec), 0.05, 0).unwrap();
        assert_eq!(c.kappas, vec![1.0]);
    }

    #[test]
    fn kappa_two_ways() {
        let spec = ramanujan();
        let c = corrections(&spec, &point(&spec), 0.05, 3).unwrap();
        for (i, k) in c.kappas.iter().enumerate() {
            let p = kappa_by_partitions(&c.lambdas, 2 * i);
            assert!(
                (k - p).abs() <= 1e-12 * k.abs().max(1e-3),
                "kappa_{}",
                2 * i
            );
        }
    }

    #[test]
    fn kappa_two_decreases() {
        let spec = ramanujan();
        let sp = point(&spec);
        let k2: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&t| corrections(&spec, &sp, t, 1).unwrap().kappas[1].abs())
            .collect();
        assert!(k2[0] > k2[1] && k2[1] > k2[2], "{k2:?}");
    }

    #[test]
    fn peak_against_sum() {
        let spec = ramanujan();
        let sp = point(&spec);
        let t = 0.02;
        let s = series_sum(&spec, t).unwrap();
        let e0 = peak_value(&spec, &sp, t, 0).unwrap().rel_diff(s);
        let e2 = peak_value(&spec, &sp, t, 2).unwrap().rel_diff(s);
        assert!(e0 <= 0.03);
        assert!(e2 < e0, "{e2} vs {e0}");
    }

    #[test]
    fn ramanujan_leading_constant() {
        let spec = ramanujan();
        let pf = build_phase(&spec);
        let (c, p, r) = leading_constant(&pf, &point(&spec)).unwrap();
        assert!((c - (PI * 2.0 / 5f64.sqrt()).sqrt()).abs() < 1e-13);
        assert_eq!(p, -0.5);
        assert!((r + 2.0 * PI * PI / 15.0).abs() < 1e-14);
    }

    #[test]
    fn tail_examples() {
        let pf = build_phase(&euler(1.0));
        assert_eq!(tail_leading(&pf, 0.05).unwrap(), LogValue::ONE);
        let pf = build_phase(&euler(2.0));
        let v = tail_leading(&pf, 0.05).unwrap();
        assert!((v.log_abs - 0.05f64.ln()).abs() < 1e-15);
        assert!(matches!(
            tail_leading(&build_phase(&ramanujan()), 0.05),
            Err(Error::Branch(_))
        ));
    }

    #[test]
    fn ramanujan_total() {
        let prod = ProductSpec::new(
            0.5,
            0.5,
            0.0,
            vec![QuadTerm::new(1.0, 1.0, 1.0, 0.0, 2.0).unwrap()],
        )
        .unwrap();
        let r = asym_total(&prod, 0.02, DEFAULT_L, DEFAULT_M).unwrap();
        assert!((r.rate - PI * PI / 5.0).abs() < 1e-10);
        assert!((r.t_power - 0.5).abs() < 1e-15);
        assert!((r.log_constant + 0.5 * (2.0 * PI * 5f64.sqrt()).ln()).abs() < 1e-8);
        assert_eq!(r.branch, Branch::Peak);
        let exact = EulerianForm::from_product(&prod)
            .unwrap()
            .sum_total(0.02)
            .unwrap();
        assert!(r.value().rel_diff(exact) < 1e-5);
    }

    #[test]
    fn euler_total() {
        let form = EulerianForm::bare(euler(1.0));
        for &t in &[0.1, 0.05] {
            let r = asym_form(&form, t, 2, 8).unwrap();
            assert_eq!(r.branch, Branch::Tail);
            assert!((r.value().to_f64() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hypothesis_failure_refused() {
        let spec = SeriesSpec::new(
            0.0,
            0.0,
            -1.0,
            vec![PochTerm::new(1.0, 1.0, 1.0, 1.0).unwrap()],
        )
        .unwrap();
        let r = asym_form(&EulerianForm::bare(spec), 0.05, 2, 8);
        assert!(matches!(r, Err(Error::Hypothesis(_))));
    }
}
