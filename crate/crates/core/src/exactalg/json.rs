//! JSON encodings for scalars and matrices.
//!
//! Matrix: `{"n", "mode": "exact"|"approx", "order", "entries"}` where an exact
//! entry is a list of `order` rational strings (coefficients of ζ^0..ζ^{order-1})
//! and an approx entry is `[re, im]`. On input an exact entry may also be a bare
//! integer or a single rational string.
//!
//! Standalone scalar: an integer, a rational string, `[re, im]`, or
//! `{"order": N, "coeffs": [...]}`.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::cyclo::{format_rational, parse_rational, Cyclo, Rational};
use super::mat::Mat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn rational_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                parse_rational(&n.to_string())
            }
        }
        _ => Err(bad(format!("expected a rational, got {v}"))),
    }
}

fn exact_from_coeffs(order: u32, coeffs: &[Value]) -> Result<Cyclo> {
    if coeffs.len() > order as usize {
        return Err(bad(format!(
            "{} coefficients given for cyclotomic order {order}",
            coeffs.len()
        )));
    }
    let rats = coeffs.iter().map(rational_from_value).collect::<Result<Vec<_>>>()?;
    Cyclo::from_power_coeffs(order, &rats)
}

fn approx_from_value(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| bad("approx real part must be a number"))?;
            let im = a[1].as_f64().ok_or_else(|| bad("approx imaginary part must be a number"))?;
            Ok(Complex64::new(re, im))
        }
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        _ => Err(bad(format!("expected [re, im], got {v}"))),
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::Object(o) => {
            let order = o
                .get("order")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("exact scalar needs an integer \"order\""))? as u32;
            let coeffs = o
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("exact scalar needs a \"coeffs\" list"))?;
            Ok(Scalar::Exact(exact_from_coeffs(order, coeffs)?))
        }
        Value::Array(_) => Ok(Scalar::Approx(approx_from_value(v)?)),
        Value::String(_) => Ok(Scalar::rational(&rational_from_value(v)?)),
        Value::Number(n) if n.is_i64() => Ok(Scalar::rational(&rational_from_value(v)?)),
        Value::Number(n) => Ok(Scalar::approx(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        _ => Err(bad(format!("cannot read a scalar from {v}"))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(c) => {
            let z = c.to_complex();
            json!({
                "order": c.order(),
                "coeffs": c.power_vector().iter().map(format_rational).collect::<Vec<_>>(),
                "approx": [z.re, z.im],
            })
        }
        Scalar::Approx(z) => json!([z.re, z.im]),
    }
}

pub fn mat_to_json(m: &Mat) -> Value {
    let n = m.n();
    let rows: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array(
                m.row(i)
                    .iter()
                    .map(|s| match s {
                        Scalar::Exact(c) => json!(c
                            .power_vector()
                            .iter()
                            .map(format_rational)
                            .collect::<Vec<_>>()),
                        Scalar::Approx(z) => json!([z.re, z.im]),
                    })
                    .collect(),
            )
        })
        .collect();
    if m.is_exact() {
        json!({"n": n, "mode": "exact", "order": m.order().unwrap_or(1), "entries": rows})
    } else {
        json!({"n": n, "mode": "approx", "entries": rows})
    }
}

pub fn mat_from_json(v: &Value) -> Result<Mat> {
    let obj = v.as_object().ok_or_else(|| bad("matrix must be a JSON object"))?;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("matrix needs an \"entries\" array"))?;
    let n = match obj.get("n") {
        Some(x) => x.as_u64().ok_or_else(|| bad("\"n\" must be a non-negative integer"))? as usize,
        None => entries.len(),
    };
    if entries.len() != n {
        return Err(bad(format!("\"n\" is {n} but {} rows given", entries.len())));
    }
    let mode = obj.get("mode").and_then(Value::as_str).unwrap_or("exact");
    let order = obj.get("order").and_then(Value::as_u64).unwrap_or(1) as u32;
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| bad(format!("row {i} must be an array of length {n}")))?;
        for e in row {
            let s = match mode {
                "exact" => match e {
                    Value::Array(coeffs) => Scalar::Exact(exact_from_coeffs(order, coeffs)?),
                    other => Scalar::rational(&rational_from_value(other)?),
                },
                "approx" => Scalar::Approx(approx_from_value(e)?),
                m => return Err(bad(format!("unknown mode {m:?}"))),
            };
            data.push(s);
        }
    }
    Mat::new(n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roundtrip() {
        let m = Mat::from_fn(2, |i, j| Scalar::zeta(3, (i + 2 * j) as i64));
        let back = mat_from_json(&mat_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn approx_roundtrip() {
        let m = Mat::from_fn(2, |i, j| Scalar::approx(i as f64 + 0.5, j as f64 - 0.25));
        let back = mat_from_json(&mat_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn lenient_integer_entries() {
        let v: Value = serde_json::from_str(r#"{"n":2,"entries":[[1,"1/2"],[0,-3]]}"#).unwrap();
        let m = mat_from_json(&v).unwrap();
        assert_eq!(m.get(0, 1), &Scalar::ratio(1, 2));
    }

    #[test]
    fn scalar_forms() {
        assert_eq!(scalar_from_json(&json!("3/4")).unwrap(), Scalar::ratio(3, 4));
        assert_eq!(scalar_from_json(&json!(2)).unwrap(), Scalar::int(2));
        let w = Scalar::zeta(5, 2);
        assert_eq!(scalar_from_json(&scalar_to_json(&w)).unwrap(), w);
        assert!(!scalar_from_json(&json!([0.5, 1.0])).unwrap().is_exact());
        assert!(scalar_from_json(&json!(true)).is_err());
    }

    #[test]
    fn malformed_matrix() {
        let v: Value = serde_json::from_str(r#"{"n":2,"entries":[[1,2]]}"#).unwrap();
        assert!(mat_from_json(&v).is_err());
    }
}
