//! JSON spec files.
//!
//! ```json
//! {"A": 0.5, "B": 0.5, "v": 0, "quads": [{"a": 1, "b": 1, "c": 1, "d": 0, "S": 2}]}
//! ```
//!
//! An already normalized series may be given with `"terms"` (objects with
//! `alpha`, `beta`, `gamma`, `S`) in place of `"quads"`.

use std::path::Path;

use qasym_core::qseries::{
    check_domain, EulerianForm, PochTerm, ProductSpec, QuadTerm, SeriesSpec,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    v: f64,
    quads: Option<Vec<RawQuad>>,
    terms: Option<Vec<RawTerm>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuad {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    #[serde(rename = "S")]
    s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    alpha: f64,
    beta: f64,
    gamma: f64,
    #[serde(rename = "S")]
    s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedSpec {
    Product(ProductSpec),
    Series(SeriesSpec),
}

impl LoadedSpec {
    pub fn form(&self) -> Result<EulerianForm, qasym_core::Error> {
        match self {
            LoadedSpec::Product(p) => EulerianForm::from_product(p),
            LoadedSpec::Series(s) => Ok(EulerianForm::bare(s.clone())),
        }
    }
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec, CliError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: origin.clone(),
        source,
    })?;
    parse_spec(&text, &origin)
}

/// Parses and validates spec text; `origin` names the source in errors.
pub fn parse_spec(text: &str, origin: &str) -> Result<LoadedSpec, CliError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.into(),
        line: e.line(),
        column: e.column(),
        msg: strip_position(&e.to_string()),
    })?;
    let invalid = |line: usize, msg: String| CliError::Invalid {
        path: origin.into(),
        line,
        msg,
    };

    check_domain(raw.a, raw.b, raw.v)
        .map_err(|e| invalid(element_line(text, "A", None), e.to_string()))?;

    match (raw.quads, raw.terms) {
        (Some(_), Some(_)) => Err(invalid(
            element_line(text, "terms", None),
            "give either \"quads\" or \"terms\", not both".into(),
        )),
        (None, None) => Err(invalid(1, "missing \"quads\" (or \"terms\")".into())),
        (Some(quads), None) => {
            let mut out = Vec::with_capacity(quads.len());
            for (i, q) in quads.iter().enumerate() {
                let quad = QuadTerm::new(q.a, q.b, q.c, q.d, q.s).map_err(|e| {
                    invalid(
                        element_line(text, "quads", Some(i)),
                        format!("quads[{i}]: {e}"),
                    )
                })?;
                out.push(quad);
            }
            ProductSpec::new(raw.a, raw.b, raw.v, out)
                .map(LoadedSpec::Product)
                .map_err(|e| invalid(element_line(text, "quads", None), e.to_string()))
        }
        (None, Some(terms)) => {
            let mut out = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                let term = PochTerm::new(t.alpha, t.beta, t.gamma, t.s).map_err(|e| {
                    invalid(
                        element_line(text, "terms", Some(i)),
                        format!("terms[{i}]: {e}"),
                    )
                })?;
                out.push(term);
            }
            SeriesSpec::new(raw.a, raw.b, raw.v, out)
                .map(LoadedSpec::Series)
                .map_err(|e| invalid(element_line(text, "terms", None), e.to_string()))
        }
    }
}

// serde_json appends " at line L column C"; the position is reported separately
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn skip_string(b: &[u8], open: usize) -> usize {
    let mut i = open + 1;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            b'"' => return i + 1,
            _ => i += 1,
        }
    }
    b.len()
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// Start of the `n`-th element of the array opening at `open`.
fn nth_element(b: &[u8], open: usize, n: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut count = 0;
    let mut expecting = true;
    let mut i = open + 1;
    while i < b.len() {
        let c = b[i];
        if expecting && !c.is_ascii_whitespace() {
            if c == b']' && depth == 0 {
                return None;
            }
            if count == n {
                return Some(i);
            }
            expecting = false;
        }
        match c {
            b'"' => {
                i = skip_string(b, i);
                continue;
            }
            b'{' | b'[' => depth += 1,
            b'}' | b']' => {
                if depth == 0 {
                    return None;
                }
                depth -= 1;
            }
            b',' if depth == 0 => {
                count += 1;
                expecting = true;
            }
            _ => {}
        }
        i += 1;
    }
    None
}

/// 1-based line of the top-level `key`, or of element `index` of the
/// array stored under it. Falls back to line 1.
fn element_line(text: &str, key: &str, index: Option<usize>) -> usize {
    let b = text.as_bytes();
    let line_at = |pos: usize| 1 + b[..pos].iter().filter(|&&c| c == b'\n').count();
    let mut depth = 0usize;
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'"' => {
                let start = i;
                i = skip_string(b, i);
                let j = skip_ws(b, i);
                let is_key = depth == 1 && j < b.len() && b[j] == b':';
                if is_key && text.get(start + 1..i - 1) == Some(key) {
                    let Some(n) = index else {
                        return line_at(start);
                    };
                    let open = skip_ws(b, j + 1);
                    if open < b.len() && b[open] == b'[' {
                        return nth_element(b, open, n).map_or(line_at(start), line_at);
                    }
                    return line_at(start);
                }
                continue;
            }
            b'{' | b'[' => depth += 1,
            b'}' | b']' => depth = depth.saturating_sub(1),
            _ => {}
        }
        i += 1;
    }
    1
}
