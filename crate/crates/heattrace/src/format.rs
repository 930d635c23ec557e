//! Datum and weight files.
//!
//! A datum file is JSON with keys `name`, `rank`, `dim_a`, `dim_tg` and
//! `roots`, each root written as `{"coords": [...], "mult_p": 0|1, "mult_k": 0|1}`.
//! Only one root of every +- pair is listed. [`serialize_datum`] writes the
//! canonical form: keys in that order, 17 significant digits, each pair
//! represented by its lexicographically positive member, roots sorted.

use std::cmp::Ordering;
use std::fmt::Write as _;

use heattrace_core::rootdata::{validate_datum, CartanDatum, HighestWeight, RestrictedRoot};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}: {message}", location(self))]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

fn location(e: &ParseError) -> String {
    match (e.line, &e.field) {
        (Some(l), Some(f)) => format!("line {l}, field `{f}`"),
        (Some(l), None) => format!("line {l}"),
        (None, Some(f)) => format!("field `{f}`"),
        (None, None) => String::from("datum"),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootEntry {
    coords: Vec<f64>,
    mult_p: u8,
    mult_k: u8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumFile {
    name: String,
    rank: usize,
    dim_a: usize,
    dim_tg: usize,
    roots: Vec<RootEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    lambda: Vec<f64>,
    #[serde(default)]
    lambda_a: Vec<f64>,
}

/// serde_json reports the offending key between backticks.
fn from_json_error(e: serde_json::Error) -> ParseError {
    let msg = e.to_string();
    let field = msg
        .split('`')
        .nth(1)
        .filter(|_| msg.contains("field"))
        .map(String::from);
    ParseError {
        line: (e.line() > 0).then_some(e.line()),
        field,
        message: msg.split(" at line ").next().unwrap_or(&msg).to_string(),
    }
}

/// Line of the `index`-th `"coords"` key, used to place errors found after
/// deserialisation.
fn root_line(text: &str, index: usize) -> Option<usize> {
    let pos = text.match_indices("\"coords\"").nth(index)?.0;
    Some(text[..pos].matches('\n').count() + 1)
}

pub fn parse_datum(text: &str) -> Result<CartanDatum, ParseError> {
    let file: DatumFile = serde_json::from_str(text).map_err(from_json_error)?;
    let fail = |i: usize, field: &str, message: String| ParseError {
        line: root_line(text, i),
        field: Some(format!("roots[{i}].{field}")),
        message,
    };
    let mut listed = Vec::with_capacity(file.roots.len());
    for (i, r) in file.roots.iter().enumerate() {
        if r.coords.len() != file.rank {
            return Err(fail(i, "coords", format!("expected {} coordinates", file.rank)));
        }
        if r.coords.iter().all(|&x| x == 0.0) {
            return Err(fail(i, "coords", "a root cannot vanish".into()));
        }
        for (name, m) in [("mult_p", r.mult_p), ("mult_k", r.mult_k)] {
            if m > 1 {
                return Err(fail(i, name, format!("multiplicity {m} is not 0 or 1")));
            }
        }
        if r.mult_p + r.mult_k == 0 {
            return Err(fail(i, "mult_p", "root with zero multiplicity".into()));
        }
        let neg: Vec<f64> = r.coords.iter().map(|x| -x).collect();
        if let Some(j) = file.roots[..i]
            .iter()
            .position(|q| q.coords == r.coords || q.coords == neg)
        {
            return Err(fail(i, "coords", format!("same +- pair as roots[{j}]")));
        }
        listed.push(RestrictedRoot::new(&r.coords, r.mult_p, r.mult_k));
    }
    if file.dim_tg > file.rank {
        return Err(ParseError {
            line: None,
            field: Some("dim_tg".into()),
            message: "dim_tg exceeds rank".into(),
        });
    }
    let datum = CartanDatum::from_positive(&file.name, file.rank, file.dim_a, file.dim_tg, listed);
    validate_datum(&datum).map_err(|e| ParseError {
        line: None,
        field: Some("roots".into()),
        message: e.to_string(),
    })?;
    Ok(datum)
}

/// `%.17g`: shortest fixed or exponent form carrying 17 significant digits.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return String::from("0");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let out = if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    };
    if out.contains('.') {
        out.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        out
    }
}

fn cmp_coords(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// The member of a +- pair whose first nonzero coordinate is positive.
fn positive_member(r: &RestrictedRoot) -> Vec<f64> {
    let c: Vec<f64> = r.v.iter().map(|&x| x + 0.0).collect();
    match c.iter().find(|x| **x != 0.0) {
        Some(x) if *x < 0.0 => c.iter().map(|x| -x).collect(),
        _ => c,
    }
}

pub fn serialize_datum(d: &CartanDatum) -> String {
    let mut reps: Vec<(Vec<f64>, u8, u8)> = Vec::new();
    for r in &d.roots {
        let c = positive_member(r);
        if !reps.iter().any(|(q, _, _)| q == &c) {
            reps.push((c, r.mult_p, r.mult_k));
        }
    }
    reps.sort_by(|a, b| cmp_coords(&a.0, &b.0));
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"name\": {},", serde_json::to_string(&d.name).expect("string"));
    let _ = writeln!(s, "  \"rank\": {},", d.r0);
    let _ = writeln!(s, "  \"dim_a\": {},", d.dim_a);
    let _ = writeln!(s, "  \"dim_tg\": {},", d.dim_tg);
    s.push_str("  \"roots\": [");
    for (i, (c, p, k)) in reps.iter().enumerate() {
        let coords: Vec<String> = c.iter().map(|&x| fmt_g17(x)).collect();
        let _ = write!(
            s,
            "{}\n    {{\"coords\": [{}], \"mult_p\": {p}, \"mult_k\": {k}}}",
            if i == 0 { "" } else { "," },
            coords.join(", ")
        );
    }
    s.push_str(if reps.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    s
}

/// A weight file `{"lambda": [...], "lambda_a": [...]}`.
pub fn parse_weight(text: &str) -> Result<HighestWeight, ParseError> {
    let w: WeightFile = serde_json::from_str(text).map_err(from_json_error)?;
    let mut hw = HighestWeight::new(&w.lambda);
    hw.lambda_a = w.lambda_a;
    Ok(hw)
}

/// Comma-separated decimals, as given on the command line.
pub fn parse_list(text: &str) -> Result<Vec<f64>, ParseError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .enumerate()
        .map(|(i, s)| {
            s.trim().parse::<f64>().map_err(|e| ParseError {
                line: None,
                field: Some(format!("[{i}]")),
                message: format!("`{}`: {e}", s.trim()),
            })
        })
        .collect()
}
