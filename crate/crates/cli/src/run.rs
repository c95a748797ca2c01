//! Run configuration and the five commands.

use std::path::PathBuf;

use clap::ValueEnum;
use qasym_core::expansion::{asym_form, AsymptoticResult, ComponentKind};
use qasym_core::phase::{build_phase, check_hypothesis};
use qasym_core::presets::{self, PRESET_NAMES};
use qasym_core::qseries::{series_sum, EulerianForm, T_MAX};
use qasym_core::quad::integral;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{from_core, CliError};
use crate::spec_file::load_spec;

pub const DEFAULT_GRID: [f64; 3] = [0.1, 0.05, 0.025];
pub const DEFAULT_REL_TOL: f64 = 1e-10;

pub const CSV_HEADER: &str = "t,log_sum,log_integral,log_asym,ratio_sum_integral,ratio_sum_asym";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Eval,
    Integral,
    Asym,
    Verify,
    Preset,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Integral => "integral",
            Command::Asym => "asym",
            Command::Verify => "verify",
            Command::Preset => "preset",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecSource {
    File(PathBuf),
    Preset(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec_source: Option<SpecSource>,
    pub t_grid: Vec<f64>,
    pub order_l: usize,
    pub order_m: usize,
    pub rel_tol: f64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// Checks the numeric options and puts the grid in descending order.
    pub fn normalized(mut self) -> Result<Self, CliError> {
        if self.t_grid.is_empty() {
            return Err(CliError::Usage("empty t grid".into()));
        }
        for &t in &self.t_grid {
            if !(t > 0.0 && t < T_MAX) {
                return Err(CliError::Usage(format!("t = {t} outside (0, {T_MAX})")));
            }
        }
        self.t_grid.sort_by(|a, b| b.total_cmp(a));
        self.t_grid.dedup();
        if !(self.rel_tol >= 1e-12 && self.rel_tol < 1.0) {
            return Err(CliError::Usage(format!(
                "rel-tol = {} outside [1e-12, 1)",
                self.rel_tol
            )));
        }
        Ok(self)
    }
}

/// `START:STOP:COUNT[:log|:lin]`, both ends included.
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad t grid '{s}', expected START:STOP:COUNT[:log]"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    let log = match parts.get(3).map(|p| p.trim()) {
        None | Some("lin") => false,
        Some("log") => true,
        Some(_) => return Err(bad()),
    };
    if count == 0 || (log && !(start > 0.0 && stop > 0.0)) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let f = i as f64 / n;
            if i == 0 {
                start
            } else if i == count - 1 {
                stop
            } else if log {
                (start.ln() + f * (stop.ln() - start.ln())).exp()
            } else {
                start + f * (stop - start)
            }
        })
        .collect())
}

/// What a run produced: the text to emit, and a failure to report after
/// emitting it (verify writes its CSV even when the ratios do not shrink).
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub failure: Option<CliError>,
}

fn resolve(source: &Option<SpecSource>) -> Result<EulerianForm, CliError> {
    match source {
        None => Err(CliError::Usage(
            "one of --spec or --preset is required".into(),
        )),
        Some(SpecSource::File(path)) => load_spec(path)?
            .form()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        Some(SpecSource::Preset(name)) => presets::by_name(name)
            .map(|p| p.form)
            .map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn inputs(cfg: &RunConfig) -> Value {
    let (spec, preset) = match &cfg.spec_source {
        Some(SpecSource::File(p)) => (Value::from(p.display().to_string()), Value::Null),
        Some(SpecSource::Preset(n)) => (Value::Null, Value::from(n.as_str())),
        None => (Value::Null, Value::Null),
    };
    json!({
        "spec": spec,
        "preset": preset,
        "t_grid": cfg.t_grid,
        "order_L": cfg.order_l,
        "order_M": cfg.order_m,
        "rel_tol": cfg.rel_tol,
    })
}

/// Evaluates `row` on every grid point concurrently, keeping grid order and
/// reporting the first failing row.
fn per_t<T: Send>(
    grid: &[f64],
    row: impl Fn(f64) -> Result<T, qasym_core::Error> + Sync,
) -> Result<Vec<T>, CliError> {
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&t| row(t).map_err(|e| from_core(e, t)))
        .collect();
    rows.into_iter().collect()
}

fn require_hypothesis(form: &EulerianForm) -> Result<(), CliError> {
    let c = check_hypothesis(&build_phase(&form.series));
    if c.holds {
        Ok(())
    } else {
        Err(CliError::Hypothesis(c.diagnostic))
    }
}

fn document(cfg: &RunConfig, results: Value) -> String {
    let doc = json!({
        "command": cfg.command.name(),
        "inputs": inputs(cfg),
        "results": results,
    });
    serde_json::to_string_pretty(&doc).expect("JSON values always serialize") + "\n"
}

fn integral_total(
    form: &EulerianForm,
    t: f64,
    rel_tol: f64,
) -> Result<(f64, f64, usize), qasym_core::Error> {
    let r = integral(&form.series, t, rel_tol)?;
    let outer = form.outer_factor(t)?;
    Ok((
        r.value.log_abs + outer.log_abs,
        r.abs_error_log + outer.log_abs,
        r.subdivisions,
    ))
}

fn asym_json(r: &AsymptoticResult) -> Value {
    let v = r.value();
    let components: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            let (kind, u, order) = match c.kind {
                ComponentKind::Peak { u, order } => ("peak", Value::from(u), Value::from(order)),
                ComponentKind::Tail => ("tail", Value::Null, Value::Null),
            };
            json!({
                "kind": kind,
                "u": u,
                "order": order,
                "rate": c.rate,
                "t_power": c.t_power,
                "log_constant": c.log_constant,
                "log_value": c.value.log_abs,
                "sign": c.value.sign,
            })
        })
        .collect();
    json!({
        "t": r.t,
        "log_value": v.log_abs,
        "sign": v.sign,
        "branch": r.branch.to_string(),
        "diagnostics": {
            "rate": r.rate,
            "t_power": r.t_power,
            "log_constant": r.log_constant,
            "log_leading": r.log_leading(),
            "correction_factor": r.correction_factor,
            "components": components,
            "prefactor": {
                "a_h": r.prefactor.a_h,
                "b_h": r.prefactor.b_h,
                "log_c_h": r.prefactor.log_c_h,
                "sign": r.prefactor.sign,
                "a_ell": r.prefactor.a_ell,
            },
        },
    })
}

fn run_eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let form = resolve(&cfg.spec_source)?;
    let rows = per_t(&cfg.t_grid, |t| {
        let sum = series_sum(&form.series, t)?;
        let outer = form.outer_factor(t)?;
        let total = sum * outer;
        Ok(json!({
            "t": t,
            "log_value": total.log_abs,
            "sign": total.sign,
            "branch": Value::Null,
            "diagnostics": {"log_series": sum.log_abs, "log_outer": outer.log_abs},
        }))
    })?;
    Ok(Outcome {
        output: document(cfg, Value::Array(rows)),
        failure: None,
    })
}

fn run_integral(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let form = resolve(&cfg.spec_source)?;
    let rows = per_t(&cfg.t_grid, |t| {
        let (log_value, abs_error_log, subdivisions) = integral_total(&form, t, cfg.rel_tol)?;
        Ok(json!({
            "t": t,
            "log_value": log_value,
            "sign": 1,
            "branch": Value::Null,
            "diagnostics": {"abs_error_log": abs_error_log, "subdivisions": subdivisions},
        }))
    })?;
    Ok(Outcome {
        output: document(cfg, Value::Array(rows)),
        failure: None,
    })
}

fn run_asym(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let form = resolve(&cfg.spec_source)?;
    require_hypothesis(&form)?;
    let rows = per_t(&cfg.t_grid, |t| {
        asym_form(&form, t, cfg.order_l, cfg.order_m).map(|r| asym_json(&r))
    })?;
    Ok(Outcome {
        output: document(cfg, Value::Array(rows)),
        failure: None,
    })
}

/// One verify row: `(t, log_sum, log_integral, log_asym)`.
type VerifyRow = (f64, f64, f64, f64);

pub fn run_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let form = resolve(&cfg.spec_source)?;
    require_hypothesis(&form)?;
    let rows: Vec<VerifyRow> = per_t(&cfg.t_grid, |t| {
        let sum = form.sum_total(t)?.log_abs;
        let (int, _, _) = integral_total(&form, t, cfg.rel_tol)?;
        let asym = asym_form(&form, t, cfg.order_l, cfg.order_m)?
            .value()
            .log_abs;
        Ok((t, sum, int, asym))
    })?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut deviations = Vec::with_capacity(rows.len());
    for &(t, sum, int, asym) in &rows {
        let r_int = (sum - int).exp();
        let r_asym = (sum - asym).exp();
        deviations.push((r_int - 1.0).abs());
        csv.push_str(&format!(
            "{t:.16e},{sum:.16e},{int:.16e},{asym:.16e},{r_int:.16e},{r_asym:.16e}\n"
        ));
    }
    let shrinking = deviations.windows(2).all(|w| w[1] <= w[0]);
    let failure = (!shrinking).then(|| {
        CliError::NotShrinking(format!(
            "|ratio_sum_integral - 1| not shrinking along the grid: {}",
            deviations
                .iter()
                .map(|d| format!("{d:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ))
    });
    Ok(Outcome {
        output: csv,
        failure,
    })
}

fn run_preset(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let name = match &cfg.spec_source {
        None => {
            return Ok(Outcome {
                output: document(cfg, json!({"presets": PRESET_NAMES})),
                failure: None,
            })
        }
        Some(SpecSource::Preset(n)) => n,
        Some(SpecSource::File(_)) => {
            return Err(CliError::Usage(
                "the preset command takes --preset, not --spec".into(),
            ))
        }
    };
    let p = presets::by_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = &p.form.series;
    let hyp = check_hypothesis(&build_phase(spec));
    let quads = |q: &[qasym_core::qseries::QuadTerm]| -> Vec<Value> {
        q.iter()
            .map(|q| json!({"a": q.a, "b": q.b, "c": q.c, "d": q.d, "S": q.s}))
            .collect()
    };
    let results = json!({
        "name": p.name,
        "A": spec.a(),
        "B": spec.b(),
        "v": spec.v(),
        "terms": spec.terms().iter()
            .map(|t| json!({"alpha": t.alpha, "beta": t.beta, "gamma": t.gamma, "S": t.s}))
            .collect::<Vec<_>>(),
        "prefactor": quads(&p.form.prefactor),
        "q_power": p.form.q_power,
        "product": p.product.as_ref().map(|pr| quads(pr.quads())),
        "reference": {
            "rate": p.reference.rate,
            "t_power": p.reference.t_power,
            "log_constant": p.reference.log_constant,
        },
        "hypothesis": {"holds": hyp.holds, "diagnostic": hyp.diagnostic},
        "notes": p.notes,
    });
    Ok(Outcome {
        output: document(cfg, results),
        failure: None,
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Eval => run_eval(cfg),
        Command::Integral => run_integral(cfg),
        Command::Asym => run_asym(cfg),
        Command::Verify => run_verify(cfg),
        Command::Preset => run_preset(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, preset: &str) -> RunConfig {
        RunConfig {
            command,
            spec_source: Some(SpecSource::Preset(preset.into())),
            t_grid: DEFAULT_GRID.to_vec(),
            order_l: 2,
            order_m: 8,
            rel_tol: DEFAULT_REL_TOL,
            output: None,
        }
    }

    #[test]
    fn grid_parsing() {
        let g = parse_t_grid("0.1:0.01:3:log").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[1] - 0.1f64.sqrt() * 0.1).abs() < 1e-15);
        assert_eq!(parse_t_grid("0.1:0.05:2").unwrap(), vec![0.1, 0.05]);
        assert!(parse_t_grid("0.1:0.05").is_err());
        assert!(parse_t_grid("0:0.05:3:log").is_err());
    }

    #[test]
    fn grid_is_sorted_and_checked() {
        let mut c = cfg(Command::Eval, "euler");
        c.t_grid = vec![0.025, 0.1, 0.05];
        assert_eq!(
            c.clone().normalized().unwrap().t_grid,
            DEFAULT_GRID.to_vec()
        );
        c.t_grid = vec![0.6];
        assert_eq!(c.normalized().unwrap_err().exit_code(), 1);
    }

    #[test]
    fn euler_verify() {
        let out = run_verify(&cfg(Command::Verify, "euler")).unwrap();
        assert!(out.failure.is_none());
        for line in out.output.lines().skip(1) {
            let r: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
            assert!((r - 1.0).abs() <= 1e-3, "{line}");
        }
    }

    #[test]
    fn ramanujan_corrections_converge_faster() {
        let dev = |l: usize| -> Vec<f64> {
            let mut c = cfg(Command::Verify, "ramanujan");
            c.order_l = l;
            run_verify(&c)
                .unwrap()
                .output
                .lines()
                .skip(1)
                .map(|line| (line.split(',').nth(5).unwrap().parse::<f64>().unwrap() - 1.0).abs())
                .collect()
        };
        let (d0, d2) = (dev(0), dev(2));
        for (a, b) in d0.iter().zip(&d2) {
            assert!(b < a, "{d0:?} vs {d2:?}");
        }
        assert!(d2.windows(2).all(|w| w[1] < w[0]), "{d2:?}");
    }
}
