//! Text formats: field specs, scalars, and matrices as JSON.
//!
//! Field specs read `Q[sqrt=<rat>]`, `F[<p>]`, `F[<p>^<m>]`, the latter two
//! optionally followed by `[sqrt=<elt>]` or `[as=<elt>]`; a bare finite spec
//! takes the least admissible parameter. Ground specs are `Q`, `F[<p>]` and
//! `F[<p>^<m>]`. Matrices are `{"n": 2, "entries": [[e, e], [e, e]]}` where an
//! entry is `[x, y]` (an array or a string) or a single ground element.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{parse_rational, ExtField, ExtScalar, FiniteField, GroundField, Rationals};
use crate::krange::KMatrix;
use crate::linalg::ExtMatrix;

/// A parsed extension field over either ground field.
#[derive(Debug, Clone)]
pub enum AnyExt {
    Rational(ExtField<Rationals>),
    Finite(ExtField<FiniteField>),
}

/// A parsed ground field.
#[derive(Debug, Clone)]
pub enum AnyGround {
    Rational(Rationals),
    Finite(FiniteField),
}

/// Splits `NAME[a][b]` into `NAME` and the bracket bodies.
fn bracket_groups(spec: &str) -> Result<(String, Vec<String>)> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("malformed field spec {spec:?}"));
    let head_end = s.find('[').unwrap_or(s.len());
    let head = s[..head_end].to_string();
    let mut groups = Vec::new();
    let mut rest = &s[head_end..];
    while !rest.is_empty() {
        let body = rest.strip_prefix('[').ok_or_else(err)?;
        let close = body.find(']').ok_or_else(err)?;
        groups.push(body[..close].to_string());
        rest = &body[close + 1..];
    }
    Ok((head, groups))
}

fn parse_finite(body: &str) -> Result<FiniteField> {
    let err = || Error::Parse(format!("expected <p> or <p>^<m>, got {body:?}"));
    let (p, m) = match body.split_once('^') {
        Some((p, m)) => (p.parse::<u32>().map_err(|_| err())?, m.parse::<u32>().map_err(|_| err())?),
        None => (body.parse::<u32>().map_err(|_| err())?, 1),
    };
    if m == 1 {
        FiniteField::prime(p)
    } else {
        FiniteField::new(p, m, None)
    }
}

fn key_value(group: &str) -> Result<(&str, &str)> {
    group
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected key=value, got {group:?}")))
}

pub fn parse_field_spec(spec: &str) -> Result<AnyExt> {
    let (head, groups) = bracket_groups(spec)?;
    match head.as_str() {
        "Q" => {
            let [g] = groups.as_slice() else {
                return Err(Error::Parse(format!("expected Q[sqrt=<rat>], got {spec:?}")));
            };
            match key_value(g)? {
                ("sqrt", r) => Ok(AnyExt::Rational(ExtField::quadratic(&parse_rational(r)?)?)),
                (key, _) => Err(Error::Parse(format!("unknown parameter {key:?} for Q"))),
            }
        }
        "F" => {
            let (base, param) = match groups.as_slice() {
                [base] => (base, None),
                [base, param] => (base, Some(param)),
                _ => return Err(Error::Parse(format!("expected F[<p>^<m>][sqrt=<elt>], got {spec:?}"))),
            };
            let k = parse_finite(base)?;
            let l = match param.map(|g| key_value(g)).transpose()? {
                None => ExtField::quadratic_auto(k)?,
                Some(("sqrt", e)) => {
                    let alpha = k.parse_elem(e)?;
                    ExtField::square_root(k, alpha)?
                }
                Some(("as", e)) => {
                    let eps = k.parse_elem(e)?;
                    ExtField::artin_schreier(k, eps)?
                }
                Some((key, _)) => return Err(Error::Parse(format!("unknown parameter {key:?} for F"))),
            };
            Ok(AnyExt::Finite(l))
        }
        _ => Err(Error::Parse(format!("unknown field {spec:?}; expected Q[...] or F[...]"))),
    }
}

/// Parses a ground spec; an extension parameter, if present, is ignored.
pub fn parse_ground_spec(spec: &str) -> Result<AnyGround> {
    let (head, groups) = bracket_groups(spec)?;
    match head.as_str() {
        "Q" => Ok(AnyGround::Rational(Rationals)),
        "F" => {
            let base = groups
                .first()
                .ok_or_else(|| Error::Parse(format!("expected F[<p>^<m>], got {spec:?}")))?;
            Ok(AnyGround::Finite(parse_finite(base)?))
        }
        _ => Err(Error::Parse(format!("unknown ground field {spec:?}; expected Q or F[...]"))),
    }
}

fn json_elem<K: GroundField>(k: &K, v: &Value) -> Result<K::Elem> {
    match v {
        Value::String(s) => k.parse_elem(s),
        Value::Number(n) => k.parse_elem(&n.to_string()),
        other => Err(Error::Parse(format!("expected a field element, got {other}"))),
    }
}

/// `"[x, y]"`, the form used by every emitted scalar.
pub fn scalar_to_json<K: GroundField>(l: &ExtField<K>, z: &ExtScalar<K::Elem>) -> Value {
    Value::String(l.format_scalar(z))
}

pub fn scalar_from_json<K: GroundField>(l: &ExtField<K>, v: &Value) -> Result<ExtScalar<K::Elem>> {
    let g = l.ground();
    match v {
        Value::Array(xs) if xs.len() == 2 => Ok(ExtScalar::new(json_elem(g, &xs[0])?, json_elem(g, &xs[1])?)),
        Value::Array(xs) => Err(Error::Parse(format!("expected [x, y], got {} coordinates", xs.len()))),
        Value::String(s) => l.parse_scalar(s),
        other => Ok(l.from_ground(json_elem(g, other)?)),
    }
}

fn entry_rows(v: &Value) -> Result<Vec<Vec<Value>>> {
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("matrix JSON needs an \"entries\" array".into()))?;
    let rows = entries
        .iter()
        .map(|r| r.as_array().cloned().ok_or_else(|| Error::Parse("each matrix row must be an array".into())))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = v.get("n") {
        let n = n.as_u64().ok_or_else(|| Error::Parse("\"n\" must be a positive integer".into()))? as usize;
        if n != rows.len() {
            return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    Ok(rows)
}

pub fn matrix_from_json<K: GroundField>(l: &ExtField<K>, v: &Value) -> Result<ExtMatrix<K::Elem>> {
    let rows = entry_rows(v)?
        .iter()
        .map(|r| r.iter().map(|e| scalar_from_json(l, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ExtMatrix::from_rows(rows)
}

pub fn matrix_to_json<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|z| scalar_to_json(l, z)).collect()))
        .collect();
    json!({ "n": m.n(), "entries": rows })
}

pub fn k_matrix_from_json<K: GroundField>(k: &K, v: &Value) -> Result<KMatrix<K::Elem>> {
    let rows = entry_rows(v)?
        .iter()
        .map(|r| r.iter().map(|e| json_elem(k, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    KMatrix::from_rows(rows)
}

pub fn k_matrix_to_json<K: GroundField>(k: &K, m: &KMatrix<K::Elem>) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|a| Value::String(k.format_elem(a))).collect()))
        .collect();
    json!({ "n": m.n(), "entries": rows })
}

/// Reads a JSON payload given inline (starting with `{`) or as a file path.
pub fn read_payload(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg:?}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

/// Lossy complex or real-pair rendering of an element of `Q(sqrt d)`:
/// `(x, y sqrt|d|)` for `d < 0` and the two real embeddings for `d > 0`.
pub fn approx_pair(l: &ExtField<Rationals>, z: &ExtScalar<num::BigRational>) -> Option<[f64; 2]> {
    let g = l.ground();
    let (x, y) = (g.approx(&z.c0)?, g.approx(&z.c1)?);
    let d = g.approx(l.alpha()?)?;
    let r = d.abs().sqrt();
    Some(if d < 0.0 { [x, y * r] } else { [x + y * r, x - y * r] })
}
