//! Minkowski billiards in `K` with reflection geometry from `T`: the
//! characteristic flow on `∂(K × T)`, the `h_T` length functional and the
//! search for shortest closed trajectories.

mod export;
mod flow;
mod shortest;

use serde::{Deserialize, Serialize};

use crate::bodies::{inradius_wrt, polar, ConvexBody, Vector};
use crate::error::{Error, Result};
use crate::numeric::first_crossing;

pub use export::{summary_json, trajectory_csv, trajectory_csv_header};
pub use flow::{flow, FlowConfig, FlowHalt, FlowRecord};
pub use shortest::{euclidean_inradius, shortest_closed, xi_euclidean, ShortestConfig, XiResult};

/// Default threshold on `-<grad g_T(p), n_q>` below which a reflection is
/// treated as tangential.
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub q: Vector,
    pub p: Vector,
}

impl PhasePoint {
    pub fn new(q: Vector, p: Vector) -> Self {
        Self { q, p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryKind {
    Proper,
    GlidingSuspected,
}

impl std::fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Proper => "proper",
            Self::GlidingSuspected => "gliding-suspected",
        })
    }
}

/// Bounce points `q_j ∈ ∂K` with the momentum `p_j ∈ ∂T` carried on the
/// segment from `q_j` to `q_{j+1}`.
#[derive(Debug, Clone)]
pub struct ClosedBilliardTrajectory {
    pub bounce_points: Vec<Vector>,
    pub momenta: Vec<Vector>,
    pub length: f64,
    pub closed: bool,
    pub kind: TrajectoryKind,
}

impl ClosedBilliardTrajectory {
    pub fn bounces(&self) -> usize {
        self.bounce_points.len()
    }

    /// Builds the cyclic trajectory through `points`, choosing each momentum
    /// so that `-grad g_T(p_j)` points along `q_{j+1} - q_j`.
    pub fn through(points: Vec<Vector>, t: &ConvexBody) -> Result<Self> {
        let length = trajectory_length(&points, t)?;
        let m = points.len();
        let momenta = (0..m)
            .map(|j| {
                let p = t.support_point(&(&points[j] - &points[(j + 1) % m]));
                let g = t.g(&p);
                if g > 0.0 && g.is_finite() {
                    p / g
                } else {
                    p
                }
            })
            .collect();
        Ok(Self { bounce_points: points, momenta, length, closed: true, kind: TrajectoryKind::Proper })
    }

    /// The same orbit traversed backwards.
    pub fn reversed(&self, t: &ConvexBody) -> Result<Self> {
        let mut pts = self.bounce_points.clone();
        pts.reverse();
        Self::through(pts, t)
    }
}

/// `sum_j h_T(q_{j+1} - q_j)` with indices mod `m`.
pub fn trajectory_length(points: &[Vector], t: &ConvexBody) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(format!("a closed trajectory needs at least 2 points, got {}", points.len())));
    }
    let m = points.len();
    Ok((0..m).map(|j| t.h(&(&points[(j + 1) % m] - &points[j]))).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    pub p: Vector,
    pub s: f64,
}

/// Reflection law at a bounce: `p' = p + s n_q` with the unique `s > 0`
/// returning to `∂T`.
pub fn reflect(p: &Vector, n_q: &Vector, t: &ConvexBody) -> Result<Vector> {
    reflect_with(p, n_q, t, TANGENCY_TOL).map(|r| r.p)
}

pub fn reflect_with(p: &Vector, n_q: &Vector, t: &ConvexBody, tangency_tol: f64) -> Result<Reflection> {
    if p.len() != t.dim() || n_q.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: p.len() });
    }
    let grad = t.gauge_gradient(p)?;
    let inner = grad.dot(n_q);
    if inner >= -tangency_tol {
        return Err(Error::GlidingOnset { inner });
    }
    // g_T(p + s n) - 1 is convex in s, zero at 0 and decreasing there
    let f = |s: f64| t.g(&(p + n_q * s)) - 1.0;
    let initial = 1e-6 * p.norm().max(1e-300) / n_q.norm();
    let s = first_crossing(f, initial, 1e12 * initial, 1e-15)?;
    let out = p + n_q * s;
    if (t.g(&out) - 1.0).abs() > 1e-12 {
        return Err(Error::Numerical(format!("reflection residual {:.3e}", t.g(&out) - 1.0)));
    }
    Ok(Reflection { p: out, s })
}

/// The 2-bounce orbit through a tangency point `q0` of `K` with the largest
/// homothet of `T°` inside it, and `-q0`.
pub fn two_bounce_shortest(k: &ConvexBody, t: &ConvexBody) -> Result<ClosedBilliardTrajectory> {
    if !k.is_symmetric() || !t.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let inr = inradius_wrt(k, &polar(t)?)?;
    let g = k.g(&inr.contact);
    let q0 = &inr.contact / g;
    ClosedBilliardTrajectory::through(vec![q0.clone(), -q0], t)
}
