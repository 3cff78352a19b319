//! Input parsing and report envelopes for the command-line front end.
//!
//! All commands share one self-describing JSON input document. The optional
//! `kind` field ("rational", the default, or "gaussian") selects the scalar
//! type; the remaining fields are read per command: `a`/`b` for tuple pairs,
//! `values` for plain lists, `d`/`points` for point sets, `certificate` for
//! verification. Scalars are written as strings ("3", "-1/2") or JSON
//! integers; Gaussian scalars as objects `{"re": "1", "im": "-2/3"}` with
//! omitted parts defaulting to zero, or as bare reals.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational, RationalVector};
use crate::tuple::DistinctTuple;

/// Scalar kind declared by an input document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    Rational,
    Gaussian,
}

/// A parsed `a`/`b` tuple input.
#[derive(Clone, Debug)]
pub enum TupleData {
    Rational(DistinctTuple<Rational>, Option<DistinctTuple<Rational>>),
    Gaussian(
        DistinctTuple<GaussianRational>,
        Option<DistinctTuple<GaussianRational>>,
    ),
}

/// A parsed `values` list.
#[derive(Clone, Debug)]
pub enum ValuesData {
    Rational(Vec<Rational>),
    Gaussian(Vec<GaussianRational>),
}

/// Reads a whole JSON document from a file, or standard input for `-`.
pub fn read_json(path: &str) -> Result<Value> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path)?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Writes `content` to a file, or standard output for `-`.
pub fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        use std::io::Write;
        std::io::stdout().write_all(content.as_bytes())?;
        Ok(())
    } else {
        Ok(std::fs::write(path, content)?)
    }
}

/// The uniform report envelope: library version, schema version, command
/// name, and the command's report underneath.
pub fn envelope<T: Serialize>(command: &str, report: &T) -> Result<Value> {
    Ok(json!({
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": 1,
        "command": command,
        "report": serde_json::to_value(report)?,
    }))
}

/// Serializes an envelope as pretty JSON with a trailing newline.
pub fn render_json(value: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::InvalidParameter("input document must be a JSON object".into()))
}

/// Reads the `kind` field, defaulting to rational.
pub fn input_kind(v: &Value) -> Result<InputKind> {
    match as_object(v)?.get("kind") {
        None => Ok(InputKind::Rational),
        Some(Value::String(s)) if s == "rational" => Ok(InputKind::Rational),
        Some(Value::String(s)) if s == "gaussian" => Ok(InputKind::Gaussian),
        Some(other) => Err(Error::InvalidParameter(format!(
            "unknown kind {other}; expected \"rational\" or \"gaussian\""
        ))),
    }
}

fn parse_rational_entry(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_int(i))
            } else {
                Err(Error::MalformedNumber(n.to_string()))
            }
        }
        other => Err(Error::MalformedNumber(other.to_string())),
    }
}

fn parse_gaussian_entry(v: &Value) -> Result<GaussianRational> {
    match v {
        Value::Object(map) => {
            let re = match map.get("re") {
                Some(x) => parse_rational_entry(x)?,
                None => Rational::zero(),
            };
            let im = match map.get("im") {
                Some(x) => parse_rational_entry(x)?,
                None => Rational::zero(),
            };
            Ok(GaussianRational::new(re, im))
        }
        other => Ok(GaussianRational::from_re(parse_rational_entry(other)?)),
    }
}

fn entry_list<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    match as_object(v)?.get(field) {
        Some(Value::Array(items)) => Ok(items),
        Some(_) => Err(Error::InvalidParameter(format!(
            "field {field:?} must be an array"
        ))),
        None => Err(Error::InvalidParameter(format!(
            "input is missing field {field:?}"
        ))),
    }
}

fn rational_list(v: &Value, field: &str) -> Result<Vec<Rational>> {
    entry_list(v, field)?.iter().map(parse_rational_entry).collect()
}

fn gaussian_list(v: &Value, field: &str) -> Result<Vec<GaussianRational>> {
    entry_list(v, field)?.iter().map(parse_gaussian_entry).collect()
}

/// Parses the `a` tuple and optional `b` tuple according to `kind`.
pub fn parse_tuples(v: &Value) -> Result<TupleData> {
    let has_b = as_object(v)?.contains_key("b");
    match input_kind(v)? {
        InputKind::Rational => {
            let a = DistinctTuple::new(rational_list(v, "a")?)?;
            let b = if has_b {
                Some(DistinctTuple::new(rational_list(v, "b")?)?)
            } else {
                None
            };
            Ok(TupleData::Rational(a, b))
        }
        InputKind::Gaussian => {
            let a = DistinctTuple::new(gaussian_list(v, "a")?)?;
            let b = if has_b {
                Some(DistinctTuple::new(gaussian_list(v, "b")?)?)
            } else {
                None
            };
            Ok(TupleData::Gaussian(a, b))
        }
    }
}

/// Parses a `values` list according to `kind`.
pub fn parse_values(v: &Value) -> Result<ValuesData> {
    match input_kind(v)? {
        InputKind::Rational => Ok(ValuesData::Rational(rational_list(v, "values")?)),
        InputKind::Gaussian => Ok(ValuesData::Gaussian(gaussian_list(v, "values")?)),
    }
}

/// Parses a strictly rational `values` list regardless of `kind`.
pub fn parse_rational_values(v: &Value) -> Result<Vec<Rational>> {
    rational_list(v, "values")
}

/// Parses a point-set input `{"d": ..., "points": [[...], ...]}`.
pub fn parse_point_set(v: &Value) -> Result<(usize, Vec<RationalVector>)> {
    let obj = as_object(v)?;
    let d = obj
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidParameter("input is missing integer field \"d\"".into()))?
        as usize;
    let rows = entry_list(v, "points")?;
    let mut points = Vec::with_capacity(rows.len());
    for row in rows {
        let coords = match row {
            Value::Array(items) => items
                .iter()
                .map(parse_rational_entry)
                .collect::<Result<Vec<Rational>>>()?,
            other => return Err(Error::MalformedNumber(other.to_string())),
        };
        points.push(RationalVector::new(coords));
    }
    Ok((d, points))
}

/// Locates a certificate inside `v`, leniently: a report envelope, an
/// object with a `certificate` field, or a bare certificate object.
pub fn extract_certificate(v: &Value) -> Value {
    if let Some(obj) = v.as_object() {
        if let Some(cert) = obj.get("certificate") {
            return cert.clone();
        }
        if let Some(report) = obj.get("report") {
            if let Some(inner) = report.get("certificate") {
                return inner.clone();
            }
            return report.clone();
        }
    }
    v.clone()
}
