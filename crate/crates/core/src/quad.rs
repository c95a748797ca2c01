//! `int_0^inf exp(F(x, t)) dx` in log space.
//!
//! The substitution `x = u/t` turns the integral into
//! `(1/t) int_0^inf exp(F(u/t, t)) du`, whose peaks have width `O(sqrt t)`
//! in `u`. The integrand is scaled by `exp(-F_ref)` with `F_ref` the largest
//! value seen before integration starts, then integrated with adaptive
//! Gauss-Kronrod (7/15) panels, always refining the panel with the largest
//! error estimate.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::expansion::tail_applies;
use crate::logvalue::{KahanSum, LogValue};
use crate::phase::{build_phase, stationary_points};
use crate::qseries::{f_eval, SeriesSpec};

/// Panel budget.
pub const MAX_PANELS: usize = 1 << 20;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: LogValue,
    /// Log of the estimated absolute error.
    pub abs_error_log: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // largest error first; ties broken by position for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok(Panel {
        a,
        b,
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    })
}

/// Peak locations in `u` with a width scale for each.
fn seeds(spec: &SeriesSpec, t: f64) -> Vec<(f64, f64)> {
    let pf = build_phase(spec);
    let mut out = Vec::new();
    if let Ok(sps) = stationary_points(&pf) {
        for sp in sps {
            let k = 2 * sp.order;
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            let w = (t * fact / sp.h2m.abs()).powf(1.0 / k as f64);
            out.push((sp.u, w));
        }
    }
    if tail_applies(&pf) {
        let a1 = pf.falpha()[0].0;
        out.push(((1.0 / t).ln() / a1, 1.0 / a1));
    }
    out
}

/// `int_0^inf exp(F(x, t)) dx` to relative accuracy `rel_tol`.
pub fn integral(spec: &SeriesSpec, t: f64, rel_tol: f64) -> Result<QuadResult> {
    if !(rel_tol >= 1e-12) {
        return Err(domain(
            "integral",
            format!("rel_tol = {rel_tol} below 1e-12"),
        ));
    }
    let g = |u: f64| f_eval(spec, u / t, t);
    let seeds = seeds(spec, t);

    let mut f_ref = g(0.0)?;
    for &(u, _) in &seeds {
        f_ref = f_ref.max(g(u)?);
    }

    // march out until the integrand is negligible and falling
    let cutoff = (rel_tol * 1e-4).ln();
    let mut upper = seeds.iter().map(|s| 2.0 * s.0).fold(1.0, f64::max);
    let mut iters = 0;
    loop {
        let gu = g(upper)?;
        f_ref = f_ref.max(gu);
        let falling = g(upper * 1.01)? < gu;
        if gu - f_ref < cutoff && falling {
            break;
        }
        upper *= 1.5;
        iters += 1;
        if iters > 200 {
            return Err(Error::NonConvergence {
                func: "integral",
                detail: format!("integrand not decaying by u = {upper}"),
            });
        }
    }

    let mut breaks = vec![0.0, upper];
    let n_scan = 64;
    for i in 1..n_scan {
        let u = upper * i as f64 / n_scan as f64;
        f_ref = f_ref.max(g(u)?);
        breaks.push(u);
    }
    for &(u, w) in &seeds {
        breaks.push(u);
        for m in [1.0, 2.0, 4.0, 8.0] {
            breaks.push(u - m * w);
            breaks.push(u + m * w);
        }
    }
    breaks.retain(|&u| (0.0..=upper).contains(&u));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * upper);

    let mut f = |u: f64| g(u).map(|v| (v - f_ref).exp());
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let p = gk15(&mut f, w[0], w[1])?;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    while err > rel_tol * total.abs() {
        if heap.len() >= MAX_PANELS {
            return Err(Error::NonConvergence {
                func: "integral",
                detail: format!("panel limit {MAX_PANELS} reached"),
            });
        }
        let p = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // cannot split further; accept what we have
            heap.push(p);
            break;
        }
        let left = gk15(&mut f, p.a, mid)?;
        let right = gk15(&mut f, mid, p.b)?;
        total += left.value + right.value - p.value;
        err += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
    }

    // recompute from scratch to drop accumulated update error
    let mut sum = KahanSum::default();
    let mut esum = KahanSum::default();
    for p in heap.iter() {
        sum.push(p.value);
        esum.push(p.error);
    }
    let log_t = t.ln();
    Ok(QuadResult {
        value: LogValue::from_log(f_ref + sum.value().ln() - log_t),
        abs_error_log: f_ref + esum.value().ln() - log_t,
        subdivisions: heap.len(),
    })
}
