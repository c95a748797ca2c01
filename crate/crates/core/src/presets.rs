//! Worked examples with known leading asymptotics.
//!
//! Each reference is computed from its own closed form (solving the
//! stationary equation by hand), not by the phase and expansion modules, so
//! the presets double as test oracles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qseries::{EulerianForm, PochTerm, ProductSpec, QuadTerm, SeriesSpec};
use crate::specfun::{dilog, dilog_exp_neg, li1, ln_gamma};

/// Names accepted by [`by_name`].
pub const PRESET_NAMES: [&str; 7] = [
    "ramanujan",
    "f0",
    "phi-minus",
    "rphis",
    "simple-r",
    "euler",
    "euler-b2",
];

/// Leading behaviour `exp(log_constant) t^{t_power} e^{rate/t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub rate: f64,
    pub t_power: f64,
    pub log_constant: f64,
}

impl Reference {
    pub fn log_value(&self, t: f64) -> f64 {
        self.log_constant + self.t_power * t.ln() + self.rate / t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    /// Product form, when the series has one.
    pub product: Option<ProductSpec>,
    pub form: EulerianForm,
    pub reference: Reference,
    pub notes: String,
}

fn quad(a: f64, b: f64, c: f64, d: f64, s: f64) -> Result<QuadTerm> {
    QuadTerm::new(a, b, c, d, s)
}

fn from_product(
    name: &str,
    product: ProductSpec,
    reference: Reference,
    notes: &str,
) -> Result<Preset> {
    Ok(Preset {
        name: name.into(),
        form: EulerianForm::from_product(&product)?,
        product: Some(product),
        reference,
        notes: notes.into(),
    })
}

/// `sum q^{(m^2+m)/2} / (q;q)_m^2 ~ sqrt(t/(2 pi sqrt 5)) e^{pi^2/(5t)}`.
pub fn preset_ramanujan() -> Preset {
    let product =
        ProductSpec::new(0.5, 0.5, 0.0, vec![quad(1.0, 1.0, 1.0, 0.0, 2.0).unwrap()]).unwrap();
    let reference = Reference {
        rate: PI * PI / 5.0,
        t_power: 0.5,
        log_constant: -0.5 * (2.0 * PI * 5f64.sqrt()).ln(),
    };
    from_product(
        "ramanujan",
        product,
        reference,
        "sum q^{m(m+1)/2}/(q;q)_m^2; maximum at u = 2 log golden ratio",
    )
    .unwrap()
}

/// Root `x = e^{-u}` of `x^3 + 2x^2 - x - 1 = 0` in `(0, 1)`.
pub fn f0_root() -> f64 {
    let s7 = 7f64.sqrt();
    (2.0 / 3.0) * s7 * ((1.0 / 3.0) * (-1.0 / (2.0 * s7)).acos()).cos() - 2.0 / 3.0
}

/// `sum q^{m^2} / (q^{m+1}; q)_m`, the mock theta function `F_0` rewritten.
pub fn preset_f0() -> Preset {
    let product = ProductSpec::new(
        1.0,
        0.0,
        0.0,
        vec![
            quad(1.0, 1.0, 2.0, 0.0, 1.0).unwrap(),
            quad(1.0, 1.0, 1.0, 0.0, -1.0).unwrap(),
        ],
    )
    .unwrap();
    let x = f0_root();
    let zeta = -x.ln();
    let rate = -zeta * zeta - dilog(x * x).unwrap() + dilog(x).unwrap();
    let reference = Reference {
        rate,
        t_power: -0.5,
        log_constant: 0.5 * (2.0 * PI).ln() + 0.5 * ((1.0 - x) / (2.0 - x + x * x)).ln(),
    };
    from_product(
        "f0",
        product,
        reference,
        "F0 mock theta: q^{m^2} (q^{2m+1};q)_inf/(q^{m+1};q)_inf; \
         zeta_F = -log x with x^3+2x^2-x-1 = 0, zeta_F = 0.220724...",
    )
    .unwrap()
}

/// `phi_-(q) = sum_{n>=1} q^n (-q;q)_{2n-1} / (q;q^2)_n`.
///
/// Rewritten as `q (-q;q)_inf/(q;q^2)_inf` times
/// `sum_m q^m (q^{2m+3};q^2)_inf (q^{2m+2};q)_inf / (q^{4m+4};q^2)_inf`,
/// with `(-q;q)_inf = (q^2;q^2)_inf / (q;q)_inf`.
pub fn preset_phi_minus() -> Preset {
    let series = SeriesSpec::new(
        0.0,
        1.0,
        0.0,
        vec![
            PochTerm::new(2.0, 2.0, 3.0, -1.0).unwrap(),
            PochTerm::new(2.0, 1.0, 2.0, -1.0).unwrap(),
            PochTerm::new(4.0, 2.0, 4.0, 1.0).unwrap(),
        ],
    )
    .unwrap();
    let prefactor = vec![
        quad(2.0, 2.0, 1.0, 0.0, -1.0).unwrap(),
        quad(1.0, 1.0, 1.0, 0.0, 1.0).unwrap(),
        quad(1.0, 2.0, 1.0, 0.0, 1.0).unwrap(),
    ];
    // prefactor ~ (1/2) e^{pi^2/(6t)}, tail sum ~ sqrt(pi/(6t))
    let reference = Reference {
        rate: PI * PI / 6.0,
        t_power: -0.5,
        log_constant: 0.5 * (PI / 24.0).ln(),
    };
    Preset {
        name: "phi-minus".into(),
        product: None,
        form: EulerianForm {
            series,
            prefactor,
            q_power: 1.0,
        },
        reference,
        notes: "phi_- mock theta; tail branch only, f(2) = 3/2. Leading form \
                sqrt(pi/(24t)) e^{pi^2/(6t)}; the often quoted \
                e^{pi^2/(6t)}/(2 sqrt(3 pi t)) is larger by pi/sqrt 2"
            .into(),
    }
}

/// `sum_k q^{l k(k-1)/2} e^{vk} prod (q^{a};q)_k / prod (q^{b};q)_k`
/// with `l = len(b) - len(a) > 0`.
pub fn preset_rphis(a_vec: &[f64], b_vec: &[f64], v: f64) -> Result<Preset> {
    if b_vec.len() <= a_vec.len() {
        return Err(Error::Invariant(format!(
            "need len(b) > len(a), got {} and {}",
            b_vec.len(),
            a_vec.len()
        )));
    }
    if a_vec.iter().chain(b_vec).any(|&x| !(x > 0.0)) {
        return Err(Error::Invariant("a and b entries must be positive".into()));
    }
    let l = (b_vec.len() - a_vec.len()) as f64;
    let mut quads = Vec::new();
    for &a in a_vec {
        quads.push(quad(a, 1.0, 1.0, 0.0, -1.0)?);
    }
    for &b in b_vec {
        quads.push(quad(b, 1.0, 1.0, 0.0, 1.0)?);
    }
    let product = ProductSpec::new(l / 2.0, -l / 2.0, v, quads)?;

    // H(u) = v u - l u^2/2 - l Li2(e^{-u}), maximum at e^{-u} = 1/(1+e^{v/l})
    let u = (v / l).exp().ln_1p();
    let x = (-u).exp();
    let sum_a: f64 = a_vec.iter().sum();
    let sum_b: f64 = b_vec.iter().sum();
    let shift = (sum_a - a_vec.len() as f64 / 2.0) - (sum_b - b_vec.len() as f64 / 2.0);
    let h_m1 = v * u - l * u * u / 2.0 - l * dilog_exp_neg(u);
    let h_0 = -li1(x)? * shift + l * u / 2.0;
    let h2 = l / (1.0 - x);
    let mut log_gamma = 0.0;
    for &b in b_vec {
        log_gamma += ln_gamma(b)?;
    }
    for &a in a_vec {
        log_gamma -= ln_gamma(a)?;
    }
    let reference = Reference {
        rate: h_m1 + l * PI * PI / 6.0,
        t_power: sum_b - sum_a - (l + 1.0) / 2.0,
        log_constant: h_0 + 0.5 * (2.0 * PI / h2).ln() + log_gamma - l / 2.0 * (2.0 * PI).ln(),
    };
    from_product(
        "rphis",
        product,
        reference,
        &format!("basic hypergeometric series, a = {a_vec:?}, b = {b_vec:?}, v = {v}, l = {l}"),
    )
}

/// `sum q^{A m^2 + B m} / (q^C; q^D)_{E m + F}^G`.
#[allow(clippy::many_single_char_names)]
pub fn preset_simple_r(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, g: f64) -> Result<Preset> {
    if !(a > 0.0 && c > 0.0 && d > 0.0 && e > 0.0 && f >= 0.0 && b.is_finite()) {
        return Err(Error::Invariant(
            "need A, C, D, E > 0, F >= 0 and finite B".into(),
        ));
    }
    if !(g >= 1.0 && g == g.round()) {
        return Err(Error::Invariant(format!(
            "G must be a positive integer, got {g}"
        )));
    }
    let product = ProductSpec::new(a, b, 0.0, vec![quad(c, d, e, f, g)?])?;

    // x^{2A/(EG)} + x^{DE} - 1 = 0 is increasing in x on (0, 1)
    let p = 2.0 * a / (e * g);
    let r = d * e;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.powf(p) + mid.powf(r) - 1.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let zeta = -x.ln();
    let h_m1 = -a * zeta * zeta - g / d * dilog(x.powf(r))?;
    let h_0 = (2.0 * a / e) * (c / d + f - 0.5) * zeta - b * zeta;
    let h2 = 2.0 * a + d * g * e * e * x.powf(r) / x.powf(p);
    let ratio = c / d;
    let log_c_pre = g * (ln_gamma(ratio)? + (ratio - 0.5) * d.ln() - 0.5 * (2.0 * PI).ln());
    let reference = Reference {
        rate: h_m1 + PI * PI * g / (6.0 * d),
        t_power: -0.5 + (ratio - 0.5) * g,
        log_constant: h_0 + 0.5 * (2.0 * PI / h2).ln() + log_c_pre,
    };
    from_product(
        "simple-r",
        product,
        reference,
        &format!("sum q^(A m^2 + B m)/(q^C;q^D)_(Em+F)^G with (A,B,C,D,E,F,G) = ({a},{b},{c},{d},{e},{f},{g})"),
    )
}

fn euler_like(name: &str, b: f64) -> Preset {
    let series = SeriesSpec::new(
        0.0,
        b,
        0.0,
        vec![PochTerm::new(1.0, 1.0, 1.0, -1.0).unwrap()],
    )
    .unwrap();
    Preset {
        name: name.into(),
        product: None,
        form: EulerianForm::bare(series),
        reference: Reference {
            rate: 0.0,
            t_power: b - 1.0,
            log_constant: 0.0,
        },
        notes: format!(
            "Euler identity: sum q^({b} m) (q^(m+1);q)_inf = {}; tail branch only",
            if b == 1.0 { "1" } else { "1 - q" }
        ),
    }
}

/// `sum q^m (q^{m+1};q)_inf = 1`.
pub fn preset_euler() -> Preset {
    euler_like("euler", 1.0)
}

/// `sum q^{2m} (q^{m+1};q)_inf = 1 - q`.
pub fn preset_euler_b2() -> Preset {
    euler_like("euler-b2", 2.0)
}

/// Preset by CLI name, with default parameters for the families.
pub fn by_name(name: &str) -> Result<Preset> {
    match name {
        "ramanujan" => Ok(preset_ramanujan()),
        "f0" => Ok(preset_f0()),
        "phi-minus" => Ok(preset_phi_minus()),
        "rphis" => preset_rphis(&[1.0], &[1.0, 1.0], 0.0),
        "simple-r" => preset_simple_r(1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0),
        "euler" => Ok(preset_euler()),
        "euler-b2" => Ok(preset_euler_b2()),
        _ => Err(Error::Invariant(format!(
            "unknown preset '{name}'; expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{asym_form, DEFAULT_L, DEFAULT_M};
    use crate::phase::{build_phase, check_hypothesis, h, stationary_points};

    fn check_against_engine(p: &Preset) {
        let r = asym_form(&p.form, 0.02, DEFAULT_L, DEFAULT_M).unwrap();
        assert!(
            (r.rate - p.reference.rate).abs() < 1e-10,
            "{}: rate",
            p.name
        );
        assert!(
            (r.t_power - p.reference.t_power).abs() < 1e-12,
            "{}: power",
            p.name
        );
        assert!(
            (r.log_constant - p.reference.log_constant).abs() < 1e-8,
            "{}: constant {} vs {}",
            p.name,
            r.log_constant,
            p.reference.log_constant
        );
    }

    #[test]
    fn all_presets_pass_hypothesis() {
        for name in PRESET_NAMES {
            let p = by_name(name).unwrap();
            assert!(
                check_hypothesis(&build_phase(&p.form.series)).holds,
                "{name}"
            );
        }
    }

    #[test]
    fn references_match_engine() {
        for name in PRESET_NAMES {
            check_against_engine(&by_name(name).unwrap());
        }
        check_against_engine(&preset_rphis(&[0.5, 2.0], &[1.5, 1.0, 0.7, 3.0], 0.8).unwrap());
        check_against_engine(&preset_simple_r(0.7, 0.3, 1.0, 2.0, 1.5, 1.0, 2.0).unwrap());
    }

    #[test]
    fn f0_phase_matches_closed_form() {
        let pf = build_phase(&preset_f0().form.series);
        for &u in &[0.1f64, 0.5, 1.0, 2.0] {
            let closed = -u * u - dilog((-2.0 * u).exp()).unwrap() + dilog((-u).exp()).unwrap();
            assert!((h(&pf, -1, u).unwrap() - closed).abs() <= 1e-13);
        }
        let x = f0_root();
        assert!((x * x * x + 2.0 * x * x - x - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn phi_minus_phase() {
        let pf = build_phase(&preset_phi_minus().form.series);
        for &u in &[0.2f64, 0.7, 1.5] {
            let p =
                (dilog((-4.0 * u).exp()).unwrap() - 3.0 * dilog((-2.0 * u).exp()).unwrap()) / 2.0;
            assert!((h(&pf, -1, u).unwrap() - p).abs() <= 1e-13);
        }
        assert!(stationary_points(&pf).unwrap().is_empty());
    }

    #[test]
    fn rphis_reference_at_zero_v() {
        let a = [0.5, 2.0];
        let b = [1.5, 1.0, 0.7, 3.0];
        let p = preset_rphis(&a, &b, 0.0).unwrap();
        let l = 2.0;
        let sa: f64 = a.iter().sum();
        let sb: f64 = b.iter().sum();
        let mut lg = 0.0;
        for x in b {
            lg += ln_gamma(x).unwrap();
        }
        for x in a {
            lg -= ln_gamma(x).unwrap();
        }
        // (1/pi^{l/2}) sqrt(2 pi / l) prod Gamma(b)/prod Gamma(a) (2t)^{sum b - sum a - (l+1)/2}
        let power = sb - sa - (l + 1.0) / 2.0;
        let c = -l / 2.0 * PI.ln() + 0.5 * (2.0 * PI / l).ln() + lg + power * 2f64.ln();
        assert!((p.reference.log_constant - c).abs() < 1e-12);
        assert!((p.reference.t_power - power).abs() < 1e-15);
        assert!((p.reference.rate - l * PI * PI / 12.0).abs() < 1e-13);
        let sp = stationary_points(&build_phase(&p.form.series)).unwrap();
        assert!((sp[0].u - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn simple_r_reduces_to_ramanujan() {
        let r = preset_simple_r(0.5, 0.5, 1.0, 1.0, 1.0, 0.0, 2.0).unwrap();
        let m = preset_ramanujan();
        assert_eq!(r.form, m.form);
        assert!((r.reference.rate - m.reference.rate).abs() < 1e-13);
        assert!((r.reference.log_constant - m.reference.log_constant).abs() < 1e-12);
        // B_R = CG/D - (G+1)/2
        let s = preset_simple_r(0.7, 0.2, 1.5, 2.0, 1.0, 1.0, 3.0).unwrap();
        assert!((s.reference.t_power - (1.5 * 3.0 / 2.0 - 2.0)).abs() < 1e-15);
        let sp = stationary_points(&build_phase(&s.form.series)).unwrap()[0];
        let x = (-sp.u).exp();
        assert!((x.powf(2.0 * 0.7 / 3.0) + x.powf(2.0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn unknown_name() {
        assert!(by_name("nope").is_err());
        assert!(preset_rphis(&[1.0], &[1.0], 0.0).is_err());
    }
}
