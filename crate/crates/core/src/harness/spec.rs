//! JSON body specifications.
//!
//! ```json
//! {"kind": "polar", "of": {"kind": "hanner", "tree": "(· × ·)"}}
//! ```
//!
//! Kinds: `hpoly`, `vpoly`, `ellipsoid`, `pball`, `hanner`, `random`,
//! `product`, `free_sum`, `sum`, `polar`, `scale`, plus the shorthands `cube`,
//! `cross_polytope` and `ball`. Any spec may carry `"symmetric": true`, which is
//! checked rather than trusted.

use std::path::Path;

use nalgebra::DMatrix;
use serde_json::Value;

use crate::bodies::{
    direct_product, free_sum, minkowski_sum, polar, random_symmetric_polytope, scaled, ConvexBody, Ellipsoid,
    HPolytope, HannerTree, PBall, VPolytope, Vector,
};
use crate::error::{Error, Result};

pub const MAX_SPEC_DEPTH: usize = 16;

/// Parses a JSON document into a body.
pub fn parse_body_spec(text: &str) -> Result<ConvexBody> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Spec { path: "$".into(), message: format!("invalid JSON: {e}") })?;
    build_body(&value)
}

/// Reads a spec from a file, or parses the argument itself when it looks
/// like inline JSON.
pub fn load_body_spec(arg: &str) -> Result<ConvexBody> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return parse_body_spec(arg);
    }
    let text = std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Error::Spec { path: "$".into(), message: format!("cannot read {arg}: {e}") })?;
    parse_body_spec(&text)
}

pub fn build_body(value: &Value) -> Result<ConvexBody> {
    build(value, "$", 0)
}

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Spec { path: path.to_string(), message: message.into() }
}

fn located(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        e @ Error::Spec { .. } => e,
        e => err(path, e.to_string()),
    }
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(path, format!("missing field '{key}'")))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| err(path, "expected a finite number"))
}

fn integer(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn vector(v: &Value, path: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| err(path, "expected an array of numbers"))?;
    arr.iter().enumerate().map(|(i, x)| number(x, &format!("{path}[{i}]"))).collect()
}

fn vectors(v: &Value, path: &str) -> Result<Vec<Vector>> {
    let arr = v.as_array().ok_or_else(|| err(path, "expected an array of points"))?;
    if arr.is_empty() {
        return Err(err(path, "empty list"));
    }
    let rows: Vec<Vec<f64>> =
        arr.iter().enumerate().map(|(i, x)| vector(x, &format!("{path}[{i}]"))).collect::<Result<_>>()?;
    let d = rows[0].len();
    if d == 0 {
        return Err(err(&format!("{path}[0]"), "zero-length point"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != d {
            return Err(err(&format!("{path}[{i}]"), format!("expected {d} coordinates, got {}", r.len())));
        }
    }
    Ok(rows.into_iter().map(Vector::from_vec).collect())
}

fn children<'a>(obj: &'a Value, key: &str, path: &str) -> Result<Vec<(&'a Value, String)>> {
    let arr = field(obj, key, path)?.as_array().ok_or_else(|| err(&format!("{path}.{key}"), "expected an array of specs"))?;
    if arr.len() < 2 {
        return Err(err(&format!("{path}.{key}"), "need at least two entries"));
    }
    Ok(arr.iter().enumerate().map(|(i, v)| (v, format!("{path}.{key}[{i}]"))).collect())
}

fn build(value: &Value, path: &str, depth: usize) -> Result<ConvexBody> {
    if depth > MAX_SPEC_DEPTH {
        return Err(err(path, format!("spec nesting exceeds depth {MAX_SPEC_DEPTH}")));
    }
    if !value.is_object() {
        return Err(err(path, "expected an object"));
    }
    let kind = field(value, "kind", path)?.as_str().ok_or_else(|| err(&format!("{path}.kind"), "expected a string"))?;
    let at = |key: &str| format!("{path}.{key}");
    let body = match kind {
        "hpoly" => {
            let normals = vectors(field(value, "normals", path)?, &at("normals"))?;
            let offsets = vector(field(value, "offsets", path)?, &at("offsets"))?;
            if normals.len() != offsets.len() {
                return Err(err(path, format!("{} normals but {} offsets", normals.len(), offsets.len())));
            }
            ConvexBody::from_hpoly(HPolytope::new(normals, offsets).map_err(located(path))?)
        }
        "vpoly" => {
            let pts = vectors(field(value, "vertices", path)?, &at("vertices"))?;
            let v = VPolytope::new(pts).map_err(located(path))?;
            let recenter = value.get("recenter").and_then(Value::as_bool).unwrap_or(false);
            let v = if recenter { v.recentered().map_err(located(path))? } else { v };
            ConvexBody::from_vpoly(v)
        }
        "ellipsoid" => {
            let e = if let Some(shape) = value.get("shape") {
                let rows = vectors(shape, &at("shape"))?;
                let d = rows.len();
                if rows[0].len() != d {
                    return Err(err(&at("shape"), "shape matrix must be square"));
                }
                Ellipsoid::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
            } else {
                let axes = vector(field(value, "semiaxes", path)?, &at("semiaxes"))?;
                Ellipsoid::with_semiaxes(&axes)
            };
            ConvexBody::from_ellipsoid(e.map_err(located(path))?)
        }
        "pball" => {
            let p = number(field(value, "p", path)?, &at("p"))?;
            let radius = match value.get("radius") {
                Some(r) => number(r, &at("radius"))?,
                None => 1.0,
            };
            let dim = integer(field(value, "dim", path)?, &at("dim"))? as usize;
            ConvexBody::from_pball(PBall::new(p, radius, dim).map_err(located(path))?)
        }
        "hanner" => {
            let tree = field(value, "tree", path)?.as_str().ok_or_else(|| err(&at("tree"), "expected a string"))?;
            let tree: HannerTree = tree.parse().map_err(located(&at("tree")))?;
            tree.build().map_err(located(path))?
        }
        "random" => {
            let n = integer(field(value, "n", path)?, &at("n"))? as usize;
            let m = integer(field(value, "m", path)?, &at("m"))? as usize;
            let seed = integer(field(value, "seed", path)?, &at("seed"))?;
            random_symmetric_polytope(n, m, seed).map_err(located(path))?
        }
        "product" | "free_sum" | "sum" => {
            let key = match kind {
                "product" => "factors",
                _ => "summands",
            };
            let mut parts = children(value, key, path)?.into_iter();
            let (first, first_path) = parts.next().expect("at least two");
            let mut acc = build(first, &first_path, depth + 1)?;
            for (v, p) in parts {
                let next = build(v, &p, depth + 1)?;
                acc = match kind {
                    "product" => direct_product(&acc, &next),
                    "free_sum" => free_sum(&acc, &next),
                    _ => minkowski_sum(&acc, &next),
                }
                .map_err(located(&p))?;
            }
            acc
        }
        "polar" => {
            let inner = build(field(value, "of", path)?, &at("of"), depth + 1)?;
            polar(&inner).map_err(located(path))?
        }
        "scale" => {
            let by = number(field(value, "by", path)?, &at("by"))?;
            let inner = build(field(value, "of", path)?, &at("of"), depth + 1)?;
            scaled(&inner, by).map_err(located(path))?
        }
        "cube" | "ball" => {
            let n = integer(field(value, "n", path)?, &at("n"))? as usize;
            let r = match value.get("r") {
                Some(r) => number(r, &at("r"))?,
                None => 1.0,
            };
            if kind == "cube" { ConvexBody::cube(n, r) } else { ConvexBody::ball(n, r) }.map_err(located(path))?
        }
        "cross_polytope" => {
            let n = integer(field(value, "n", path)?, &at("n"))? as usize;
            ConvexBody::cross_polytope(n).map_err(located(path))?
        }
        other => return Err(err(&at("kind"), format!("unknown kind '{other}'"))),
    };
    match value.get("symmetric") {
        Some(Value::Bool(true)) => body.claim_symmetric().map_err(located(&at("symmetric"))),
        Some(Value::Bool(false)) | None => Ok(body),
        Some(_) => Err(err(&at("symmetric"), "expected a boolean")),
    }
}
