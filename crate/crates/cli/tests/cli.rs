use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(rel)
}

fn qasym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qasym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Nonzero status with exactly one `error: ...` line on stderr.
fn assert_error(o: &Output, code: i32, needle: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains(needle), "{err}");
}

#[test]
fn verify_euler_golden() {
    let o = qasym(&["verify", "--preset", "euler"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let golden = std::fs::read_to_string(fixture("golden/verify_euler.csv")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn verify_ramanujan_golden() {
    let o = qasym(&[
        "verify",
        "--preset",
        "ramanujan",
        "--t-grid",
        "0.1:0.025:3:log",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let golden = std::fs::read_to_string(fixture("golden/verify_ramanujan.csv")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = ["verify", "--preset", "f0", "--t-grid", "0.1:0.02:6:log"];
    let a = qasym(&args);
    let b = qasym(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("euler.csv");
    let o = qasym(&[
        "verify",
        "--preset",
        "euler",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let golden = std::fs::read_to_string(fixture("golden/verify_euler.csv")).unwrap();
    assert_eq!(std::fs::read_to_string(out).unwrap(), golden);
}

#[test]
fn spec_file_matches_preset() {
    let spec = fixture("specs/ramanujan.json");
    let from_file = qasym(&["eval", "--spec", spec.to_str().unwrap(), "--t", "0.05,0.02"]);
    let from_preset = qasym(&["eval", "--preset", "ramanujan", "--t", "0.05,0.02"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let results = |o: &Output| -> serde_json::Value {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["results"].clone()
    };
    assert_eq!(results(&from_file), results(&from_preset));
}

#[test]
fn asym_json_shape() {
    let o = qasym(&["asym", "--preset", "ramanujan", "--t", "0.02"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "asym");
    assert_eq!(v["inputs"]["order_L"], 2);
    let r = &v["results"][0];
    assert_eq!(r["branch"], "peak");
    assert_eq!(r["sign"], 1);
    let rate = r["diagnostics"]["rate"].as_f64().unwrap();
    assert!((rate - std::f64::consts::PI.powi(2) / 5.0).abs() < 1e-12);
    assert!(r["log_value"].as_f64().unwrap() > 0.0);
}

#[test]
fn tail_branch_is_reported() {
    let o = qasym(&["asym", "--preset", "phi-minus", "--t", "0.05"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["branch"], "tail");
}

#[test]
fn integral_reports_error_estimate() {
    let o = qasym(&[
        "integral",
        "--preset",
        "f0",
        "--t",
        "0.05",
        "--rel-tol",
        "1e-8",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["results"][0];
    let err = r["diagnostics"]["abs_error_log"].as_f64().unwrap();
    assert!(err <= r["log_value"].as_f64().unwrap() + 1e-8f64.ln());
}

#[test]
fn preset_listing_and_details() {
    let o = qasym(&["preset"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["presets"].as_array().unwrap().len(), 7);
    let o = qasym(&["preset", "--preset", "phi-minus"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["hypothesis"]["holds"], true);
    assert_eq!(v["results"]["q_power"], 1.0);
}

#[test]
fn bad_spec_file_exits_1_without_output() {
    let spec = fixture("specs/bad_quad.json");
    let o = qasym(&["verify", "--spec", spec.to_str().unwrap()]);
    assert_error(&o, 1, "bad_quad.json:7: ");
    assert!(stderr(&o).contains("a+bd>0"));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_spec_file() {
    let o = qasym(&["eval", "--spec", "/nonexistent/spec.json"]);
    assert_error(&o, 1, "io: ");
}

#[test]
fn usage_errors() {
    assert_error(&qasym(&["frobnicate"]), 1, "usage: ");
    assert_error(&qasym(&["eval"]), 1, "--spec or --preset");
    assert_error(
        &qasym(&["eval", "--preset", "euler", "--t", "0.7"]),
        1,
        "outside",
    );
    assert_error(&qasym(&["eval", "--preset", "nope"]), 1, "unknown preset");
    assert_error(
        &qasym(&["integral", "--preset", "euler", "--rel-tol", "1e-14"]),
        1,
        "rel-tol",
    );
}

#[test]
fn hypothesis_failure_exits_2() {
    let spec = fixture("specs/no_peak.json");
    let o = qasym(&["verify", "--spec", spec.to_str().unwrap()]);
    assert_error(&o, 2, "hypothesis: ");
    assert!(o.stdout.is_empty());
}

#[test]
fn numeric_failure_exits_3() {
    // order 20 needs derivatives beyond the supported order
    let o = qasym(&[
        "asym",
        "--preset",
        "ramanujan",
        "--t",
        "0.05",
        "--order-L",
        "20",
    ]);
    assert_error(&o, 3, "numeric: t = 0.05");
    assert!(o.stdout.is_empty());
}

#[test]
fn help_succeeds() {
    let o = qasym(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("--t-grid"));
}
