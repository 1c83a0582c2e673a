//! JSON codecs. Complex numbers are `[re, im]` (a bare number is read as a
//! real), points are flat arrays, Matrix3 is a row-major array of nine
//! complex entries (a nested 3×3 array is also accepted). Output floats use
//! 17 significant digits so values round-trip exactly.

use super::linalg::{Complex, Matrix3};
use super::points::{Point2, Point3, Point5, Point7};
use super::scan::{ScanConfig, Verdict};
use crate::error::{MudomError, Result};
use serde_json::Value;
use std::fmt::Write as _;

fn perr(msg: impl Into<String>) -> MudomError {
    MudomError::Parse(msg.into())
}

pub fn parse_value(data: &[u8]) -> Result<Value> {
    serde_json::from_slice(data).map_err(|e| perr(e.to_string()))
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(perr("non-finite number"))
    }
}

pub fn complex_from_value(v: &Value) -> Result<Complex> {
    match v {
        Value::Number(n) => {
            let re = n.as_f64().ok_or_else(|| perr("number out of range"))?;
            Ok(Complex::new(finite(re)?, 0.0))
        }
        Value::Array(a) if a.len() == 2 => {
            let part = |x: &Value| {
                x.as_f64()
                    .ok_or_else(|| perr("complex parts must be numbers"))
                    .and_then(finite)
            };
            Ok(Complex::new(part(&a[0])?, part(&a[1])?))
        }
        _ => Err(perr("complex must be [re, im] or a number")),
    }
}

fn complex_array<const N: usize>(v: &Value) -> Result<[Complex; N]> {
    let a = v.as_array().ok_or_else(|| perr("expected an array"))?;
    if a.len() != N {
        return Err(perr(format!("expected {N} entries, found {}", a.len())));
    }
    let mut out = [Complex::new(0.0, 0.0); N];
    for (o, x) in out.iter_mut().zip(a) {
        *o = complex_from_value(x)?;
    }
    Ok(out)
}

pub fn point7_from_value(v: &Value) -> Result<Point7> {
    complex_array::<7>(v).map(Point7)
}

pub fn point5_from_value(v: &Value) -> Result<Point5> {
    complex_array::<5>(v).map(Point5)
}

pub fn matrix3_from_value(v: &Value) -> Result<Matrix3> {
    let a = v.as_array().ok_or_else(|| perr("matrix must be an array"))?;
    let flat: [Complex; 9] = if a.len() == 3 && a.iter().all(|r| r.as_array().is_some_and(|r| r.len() == 3)) {
        let rows: Vec<[Complex; 3]> = a.iter().map(complex_array::<3>).collect::<Result<_>>()?;
        let mut f = [Complex::new(0.0, 0.0); 9];
        for (i, r) in rows.iter().enumerate() {
            f[3 * i..3 * i + 3].copy_from_slice(r);
        }
        f
    } else {
        complex_array::<9>(v)?
    };
    Ok(Matrix3::from_fn(|i, j| flat[3 * i + j]))
}

pub fn parse_complex(data: &[u8]) -> Result<Complex> {
    complex_from_value(&parse_value(data)?)
}

pub fn parse_point7(data: &[u8]) -> Result<Point7> {
    point7_from_value(&parse_value(data)?)
}

pub fn parse_point5(data: &[u8]) -> Result<Point5> {
    point5_from_value(&parse_value(data)?)
}

pub fn parse_point3(data: &[u8]) -> Result<Point3> {
    complex_array::<3>(&parse_value(data)?).map(Point3)
}

pub fn parse_point2(data: &[u8]) -> Result<Point2> {
    complex_array::<2>(&parse_value(data)?).map(Point2)
}

pub fn parse_matrix3(data: &[u8]) -> Result<Matrix3> {
    matrix3_from_value(&parse_value(data)?)
}

/// A single Point7 or an array of them.
pub fn parse_point7_list(data: &[u8]) -> Result<Vec<Point7>> {
    let v = parse_value(data)?;
    if let Ok(p) = point7_from_value(&v) {
        return Ok(vec![p]);
    }
    v.as_array()
        .ok_or_else(|| perr("expected a point or a list of points"))?
        .iter()
        .map(point7_from_value)
        .collect()
}

/// A JSON document tree with deterministic, order-preserving output.
#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj<K: Into<String>>(fields: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Num(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => write_str(out, s),
            Json::Arr(items) => {
                if items.iter().all(|i| matches!(i, Json::Num(_) | Json::Int(_) | Json::Null)) {
                    out.push('[');
                    for (k, i) in items.iter().enumerate() {
                        if k > 0 {
                            out.push_str(", ");
                        }
                        i.write(out, indent);
                    }
                    out.push(']');
                    return;
                }
                out.push('[');
                for (k, i) in items.iter().enumerate() {
                    out.push_str(if k > 0 { ",\n" } else { "\n" });
                    pad(out, indent + 1);
                    i.write(out, indent + 1);
                }
                if !items.is_empty() {
                    out.push('\n');
                    pad(out, indent);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (k, (key, v)) in fields.iter().enumerate() {
                    out.push_str(if k > 0 { ",\n" } else { "\n" });
                    pad(out, indent + 1);
                    write_str(out, key);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                if !fields.is_empty() {
                    out.push('\n');
                    pad(out, indent);
                }
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_str(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// 17 significant digits in scientific notation; non-finite values become
/// `null` because JSON has no representation for them.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn complex_json(c: Complex) -> Json {
    Json::Arr(vec![Json::Num(c.re), Json::Num(c.im)])
}

pub fn complexes_json(v: &[Complex]) -> Json {
    Json::Arr(v.iter().copied().map(complex_json).collect())
}

pub fn matrix3_json(a: &Matrix3) -> Json {
    complexes_json(&a.0.iter().flatten().copied().collect::<Vec<_>>())
}

pub fn config_json(c: &ScanConfig) -> Json {
    Json::obj([
        ("torus_n", Json::Int(c.torus_n as i64)),
        ("disc_nr", Json::Int(c.disc_nr as i64)),
        ("disc_ntheta", Json::Int(c.disc_ntheta as i64)),
        ("refine_iters", Json::Int(c.refine_iters as i64)),
        ("tol", Json::Num(c.tol)),
        ("boundary_band", Json::Num(c.boundary_band)),
    ])
}

pub fn verdict_json(v: &Verdict) -> Json {
    Json::obj([
        ("state", Json::str(v.state.as_str())),
        ("margin", Json::Num(v.margin)),
        ("witness", complexes_json(&v.witness)),
        ("config", config_json(&v.config)),
    ])
}
