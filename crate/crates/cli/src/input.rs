use std::path::Path;

use schemespinlab::catalog;
use schemespinlab::exactalg::cyclo::parse_rational;
use schemespinlab::exactalg::json::{mat_from_json, scalar_from_json};
use schemespinlab::exactalg::scalar::golden_ratio;
use schemespinlab::knotstat::StateGraph;
use schemespinlab::qleonard::LeonardPairCandidate;
use schemespinlab::scheme::{scheme_from_json, AssociationScheme};
use schemespinlab::{Error, Mat, Mode, Result, Scalar};
use serde_json::Value;

use crate::Ctx;

/// Reads `--in` style arguments: a JSON file path, or `catalog:<id>` for a built-in payload.
pub fn read_json(ctx: &mut Ctx, spec: &str) -> Result<Value> {
    if let Some(id) = spec.strip_prefix("catalog:") {
        let entry = catalog::get(id)?;
        ctx.note_catalog(id);
        return Ok(entry.payload);
    }
    let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")))
}

fn apply_mode(ctx: &Ctx, m: Mat) -> Mat {
    if ctx.settings.mode == Mode::Approx {
        m.to_approx()
    } else {
        m
    }
}

/// A matrix object, or an object wrapping one under `key`.
pub fn matrix_from(ctx: &Ctx, v: &Value, key: &str) -> Result<Mat> {
    let inner = v.get(key).unwrap_or(v);
    Ok(apply_mode(ctx, mat_from_json(inner)?))
}

pub fn read_matrix(ctx: &mut Ctx, spec: &str) -> Result<Mat> {
    let v = read_json(ctx, spec)?;
    matrix_from(ctx, &v, "matrix")
}

pub fn read_scheme(ctx: &mut Ctx, spec: &str) -> Result<AssociationScheme> {
    let v = read_json(ctx, spec)?;
    scheme_from_json(&v, &ctx.settings)
}

pub fn read_pair(ctx: &mut Ctx, spec: &str) -> Result<LeonardPairCandidate> {
    let v = read_json(ctx, spec)?;
    let a = v.get("a").ok_or_else(|| Error::Parse("pair needs \"a\"".into()))?;
    let b = v.get("b").ok_or_else(|| Error::Parse("pair needs \"b\"".into()))?;
    LeonardPairCandidate::new(matrix_from(ctx, a, "matrix")?, matrix_from(ctx, b, "matrix")?)
}

pub fn read_graph(ctx: &mut Ctx, spec: &str) -> Result<StateGraph> {
    let v = read_json(ctx, spec)?;
    StateGraph::from_json(&v)
}

/// Scalars on the command line: `p/q`, decimals, `phi`, `zeta:N:k`, `sqrt:r`, or JSON (`{...}`, `[re, im]`).
pub fn parse_scalar(ctx: &Ctx, s: &str) -> Result<Scalar> {
    let s = s.trim();
    let value = if s == "phi" {
        golden_ratio()
    } else if let Some(rest) = s.strip_prefix("zeta:") {
        let mut parts = rest.split(':');
        let n = parts.next().and_then(|x| x.parse::<u32>().ok()).filter(|&n| n > 0);
        let k = parts.next().map_or(Some(1), |x| x.parse::<i64>().ok());
        match (n, k, parts.next()) {
            (Some(n), Some(k), None) => Scalar::zeta(n, k),
            _ => return Err(Error::Parse(format!("bad root of unity {s:?}; use zeta:N:k"))),
        }
    } else if let Some(rest) = s.strip_prefix("sqrt:") {
        Scalar::rational(&parse_rational(rest)?).sqrt()
    } else if s.starts_with('{') || s.starts_with('[') {
        scalar_from_json(&serde_json::from_str(s)?)?
    } else {
        Scalar::rational(&parse_rational(s)?)
    };
    Ok(if ctx.settings.mode == Mode::Approx {
        value.to_approx()
    } else {
        value
    })
}

pub fn parse_list(ctx: &Ctx, s: &str) -> Result<Vec<Scalar>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    if s.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(s)?;
        return v
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON list".into()))?
            .iter()
            .map(scalar_from_json)
            .collect();
    }
    s.split(',').map(|x| parse_scalar(ctx, x)).collect()
}

/// A list given inline (`1,2,3`) or as `@file.json` holding a JSON array of scalars.
pub fn read_list(ctx: &mut Ctx, s: &str) -> Result<Vec<Scalar>> {
    if let Some(path) = s.strip_prefix('@') {
        let v = read_json(ctx, path)?;
        let list = v.get("t").unwrap_or(&v);
        return list
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON list of scalars".into()))?
            .iter()
            .map(|x| scalar_from_json(x).map(|s| if ctx.settings.mode == Mode::Approx { s.to_approx() } else { s }))
            .collect();
    }
    parse_list(ctx, s)
}

pub fn parse_moves(s: &str) -> Result<Vec<(usize, usize)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|m| {
            let (a, b) = m
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("move {m:?} should look like u-v")))?;
            let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex {x:?}")));
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}
