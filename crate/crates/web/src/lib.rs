//! Browser bindings for three operations on planar bodies: a billiard orbit in
//! an ellipse with an `l^p` momentum ball, a random polygon with its polar and
//! volume product, and the shortest closed billiard of an ellipse pair.
//!
//! Every export returns a JSON string so the page needs no glue beyond
//! `JSON.parse`. The `*_json` functions do the work and are plain Rust, which
//! keeps them testable off the browser.

use std::f64::consts::PI;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use symlab::billiards::{flow, shortest_closed, FlowConfig, FlowHalt, PhasePoint};
use symlab::bodies::{inradius_wrt, polar, random_symmetric_polytope, Ellipsoid, PBall};
use symlab::volume::mahler_volume;
use symlab::{ConvexBody, Result, Vector};

const OUTLINE: usize = 180;

fn xy(v: &Vector) -> [f64; 2] {
    [v[0], v[1]]
}

/// Boundary samples `u / g(u)` over a uniform angle grid.
fn outline(k: &ConvexBody) -> Vec<[f64; 2]> {
    (0..OUTLINE)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / OUTLINE as f64;
            let u = Vector::from_vec(vec![a.cos(), a.sin()]);
            xy(&(&u / k.g(&u)))
        })
        .collect()
}

fn ellipse(a: f64, b: f64) -> Result<ConvexBody> {
    Ok(ConvexBody::from_ellipsoid(Ellipsoid::with_semiaxes(&[a, b])?))
}

fn lp_ball(p: f64) -> Result<ConvexBody> {
    Ok(ConvexBody::from_pball(PBall::new(p, 1.0, 2)?))
}

/// Polygon vertices in counter-clockwise order.
fn ccw(k: &ConvexBody) -> Vec<[f64; 2]> {
    let mut v: Vec<[f64; 2]> = k.vertices().unwrap_or_default().iter().map(xy).collect();
    v.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
    v
}

pub fn billiard_orbit_json(a: f64, b: f64, p: f64, q0: [f64; 2], angle: f64, bounces: usize) -> Result<Value> {
    let (k, t) = (ellipse(a, b)?, lp_ball(p)?);
    let dir = Vector::from_vec(vec![angle.cos(), angle.sin()]);
    let start = PhasePoint::new(Vector::from_vec(q0.to_vec()), &dir / t.g(&dir));
    let rec = flow(&k, &t, &start, &FlowConfig::with_bounces(bounces.max(1)))?;
    let halt = match rec.halt {
        FlowHalt::Closed { period } => format!("closed after {period} bounces"),
        FlowHalt::MaxBounces => "bounce limit".into(),
        FlowHalt::Gliding { .. } => "gliding".into(),
    };
    let mut points = vec![q0];
    points.extend(rec.bounces.iter().map(|b| xy(&b.q)));
    Ok(json!({
        "table": outline(&k),
        "momentum_ball": outline(&t),
        "points": points,
        "halt": halt,
        "length": rec.orbit.length,
        "closure_residual": rec.closure_residual,
    }))
}

pub fn polygon_mahler_json(pairs: usize, seed: u64) -> Result<Value> {
    let k = random_symmetric_polytope(2, pairs, seed)?;
    let kp = polar(&k)?;
    let m = mahler_volume(&k)?;
    Ok(json!({
        "body": ccw(&k),
        "polar": ccw(&kp),
        "nu": m.nu,
        "vol_k": m.vol_k,
        "vol_polar": m.vol_polar,
        "mahler_bound": m.conjectured_min,
        "santalo_max": m.santalo_max,
    }))
}

pub fn shortest_orbit_json(a: f64, b: f64, p: f64, starts: usize, seed: u64) -> Result<Value> {
    let (k, t) = (ellipse(a, b)?, lp_ball(p)?);
    let traj = shortest_closed(&k, &t, 3, starts.max(1), seed)?;
    let formula = 4.0 * inradius_wrt(&k, &polar(&t)?)?.r;
    Ok(json!({
        "table": outline(&k),
        "points": traj.bounce_points.iter().map(xy).collect::<Vec<_>>(),
        "length": traj.length,
        "four_inradius": formula,
        "kind": traj.kind.to_string(),
    }))
}

fn export(v: Result<Value>) -> std::result::Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

/// Flow from `(x, y)` inside the ellipse with semiaxes `a, b`, launched at
/// `angle` with momentum on the unit `l^p` sphere.
#[wasm_bindgen]
pub fn billiard_orbit(a: f64, b: f64, p: f64, x: f64, y: f64, angle: f64, bounces: usize) -> std::result::Result<String, JsError> {
    export(billiard_orbit_json(a, b, p, [x, y], angle, bounces))
}

#[wasm_bindgen]
pub fn polygon_mahler(pairs: usize, seed: u64) -> std::result::Result<String, JsError> {
    export(polygon_mahler_json(pairs, seed))
}

#[wasm_bindgen]
pub fn shortest_orbit(a: f64, b: f64, p: f64, starts: usize, seed: u64) -> std::result::Result<String, JsError> {
    export(shortest_orbit_json(a, b, p, starts, seed))
}
