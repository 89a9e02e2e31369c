//! Shortest closed trajectories by multi-start simplex descent.
//!
//! Minimising the length over `(∂K)^m` directly is useless: the infimum is 0
//! and the 2-bounce orbits are maxima of the 2-point length. The search
//! instead uses the characterisation of the shortest trajectory as the
//! shortest closed polygon with at most `n + 1` vertices that cannot be
//! translated into the interior of `K`. A polygon `P` cannot be translated
//! into `int(λK)` iff `φ(P) >= λ`, where `φ(P) = min_t max_j g_K(q_j + t)`,
//! so the objective is the scale-invariant ratio `L_T(P) / φ(P)`. The
//! minimiser, translated by the optimal `t` and divided by `φ`, is the orbit.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{trajectory_length, ClosedBilliardTrajectory};
use crate::bodies::{inradius_wrt, sample_directions, ConvexBody, Vector};
use crate::error::{Error, Result};
use crate::numeric::{minimize_restarting, NelderMeadConfig};
use crate::rng;
use crate::volume::{volume, VolumeConfig};

/// Consecutive bounce points closer than this (relative to the size of `K`)
/// make a candidate degenerate.
const DEGENERATE_TOL: f64 = 1e-6;
/// Points of the rescaled polygon with `g_K >= 1 - ACTIVE_TOL` are bounces.
const ACTIVE_TOL: f64 = 1e-6;
/// Relative gain a longer polygon needs to replace a shorter-`m` incumbent.
const M_IMPROVEMENT: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortestConfig {
    pub m_max: usize,
    pub starts: usize,
    pub seed: u64,
}

impl ShortestConfig {
    /// `m_max = n + 1` with 32 starts.
    pub fn for_dim(n: usize, seed: u64) -> Self {
        Self { m_max: n + 1, starts: 32, seed }
    }
}

struct Problem<'a> {
    k: &'a ConvexBody,
    t: &'a ConvexBody,
    n: usize,
    m: usize,
    scale: f64,
    symmetric: bool,
}

impl Problem<'_> {
    fn params(&self) -> usize {
        if self.n == 2 {
            self.m
        } else {
            self.m * self.n
        }
    }

    fn points(&self, x: &[f64]) -> Option<Vec<Vector>> {
        (0..self.m)
            .map(|j| {
                let d = if self.n == 2 {
                    Vector::from_column_slice(&[x[j].cos(), x[j].sin()])
                } else {
                    Vector::from_column_slice(&x[j * self.n..(j + 1) * self.n])
                };
                let g = self.k.g(&d);
                (g > 0.0 && g.is_finite()).then(|| d / g)
            })
            .collect()
    }

    /// `(φ(P), t*)`.
    fn phi(&self, pts: &[Vector]) -> (f64, Vector) {
        if self.m == 2 && self.symmetric {
            let u = &pts[1] - &pts[0];
            return (self.k.g(&u) / 2.0, -(&pts[0] + &pts[1]) / 2.0);
        }
        let centroid = pts.iter().fold(Vector::zeros(self.n), |acc, q| acc + q) / self.m as f64;
        let x0: Vec<f64> = (-&centroid / self.scale).iter().copied().collect();
        let spread = |s: &[f64]| {
            let t = Vector::from_column_slice(s) * self.scale;
            pts.iter().map(|q| self.k.g(&(q + &t))).fold(0.0, f64::max)
        };
        let cfg = NelderMeadConfig { step: 0.1, ftol: 1e-14, xtol: 1e-14, max_evals: 4000, max_restarts: 4 };
        let best = minimize_restarting(spread, &x0, &cfg);
        (best.f, Vector::from_column_slice(&best.x) * self.scale)
    }

    fn ratio(&self, x: &[f64]) -> f64 {
        let Some(pts) = self.points(x) else { return f64::INFINITY };
        let (phi, _) = self.phi(&pts);
        if !(phi > 0.0) {
            return f64::INFINITY;
        }
        trajectory_length(&pts, self.t).map(|l| l / phi).unwrap_or(f64::INFINITY)
    }

    fn initial(&self, start: usize, seed: u64) -> Vec<f64> {
        let mut stream = rng::stream(rng::derive_seed(seed, self.m as u64), start as u64);
        (0..self.params())
            .map(|_| if self.n == 2 { stream.random::<f64>() * 2.0 * PI } else { stream.sample(StandardNormal) })
            .collect()
    }

    /// Rescaled orbit from a minimiser, or `None` for a degenerate candidate.
    fn orbit(&self, x: &[f64]) -> Option<Vec<Vector>> {
        let pts = self.points(x)?;
        separated(&pts, DEGENERATE_TOL * self.scale)?;
        let (phi, t) = self.phi(&pts);
        let orbit: Vec<Vector> = pts
            .iter()
            .map(|q| (q + &t) / phi)
            .filter(|q| self.k.g(q) >= 1.0 - ACTIVE_TOL)
            .map(|q| {
                let g = self.k.g(&q);
                q / g
            })
            .collect();
        if orbit.len() < 2 {
            return None;
        }
        separated(&orbit, DEGENERATE_TOL * self.scale)
    }
}

fn separated(pts: &[Vector], tol: f64) -> Option<Vec<Vector>> {
    let m = pts.len();
    (0..m).all(|j| (&pts[(j + 1) % m] - &pts[j]).norm() > tol).then(|| pts.to_vec())
}

fn body_scale(k: &ConvexBody) -> f64 {
    let n = k.dim();
    (0..n)
        .map(|i| {
            let mut e = Vector::zeros(n);
            e[i] = 1.0;
            k.h(&e).max(k.h(&-e))
        })
        .fold(0.0, f64::max)
}

/// Shortest closed `(K, T)`-billiard trajectory with at most `m_max` bounces.
pub fn shortest_closed(
    k: &ConvexBody,
    t: &ConvexBody,
    m_max: usize,
    starts: usize,
    seed: u64,
) -> Result<ClosedBilliardTrajectory> {
    let n = k.dim();
    if t.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.dim() });
    }
    if !k.origin_interior() || !t.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    if m_max < 2 {
        return Err(Error::InvalidInput(format!("m_max must be at least 2, got {m_max}")));
    }
    if starts == 0 {
        return Err(Error::InvalidInput("need at least one start".into()));
    }
    let scale = body_scale(k);
    let outer = NelderMeadConfig { step: 0.3, ftol: 1e-12, xtol: 1e-12, max_evals: 6000, max_restarts: 6 };
    let mut best: Option<(f64, Vec<Vector>)> = None;
    let mut best_so_far = f64::INFINITY;
    for m in 2..=m_max {
        let problem = Problem { k, t, n, m, scale, symmetric: k.is_symmetric() };
        let mut best_m: Option<(f64, Vec<Vector>)> = None;
        let runs: Vec<_> = (0..starts)
            .into_par_iter()
            .map(|s| minimize_restarting(|x: &[f64]| problem.ratio(x), &problem.initial(s, seed), &outer))
            .collect();
        for found in runs {
            best_so_far = best_so_far.min(found.f);
            if !found.converged {
                continue;
            }
            let Some(orbit) = problem.orbit(&found.x) else { continue };
            let length = trajectory_length(&orbit, t)?;
            if best_m.as_ref().is_none_or(|(l, _)| length < *l) {
                best_m = Some((length, orbit));
            }
        }
        if let Some((length, orbit)) = best_m {
            let replace = match &best {
                None => true,
                Some((l, _)) => length < l * (1.0 - M_IMPROVEMENT),
            };
            if replace {
                best = Some((length, orbit));
            }
        }
    }
    let (_, orbit) = best.ok_or(Error::NoConvergence { best_so_far })?;
    ClosedBilliardTrajectory::through(orbit, t)
}

/// Euclidean inradius, maximised over the centre.
pub fn euclidean_inradius(k: &ConvexBody) -> Result<f64> {
    let n = k.dim();
    let ball = ConvexBody::ball(n, 1.0)?;
    if k.is_symmetric() {
        return Ok(inradius_wrt(k, &ball)?.r);
    }
    let cfg = NelderMeadConfig { step: 0.1, ftol: 1e-14, xtol: 1e-14, max_evals: 20_000, max_restarts: 8 };
    let scale = body_scale(k);
    let depth: Box<dyn Fn(&Vector) -> f64> = match k.halfspaces() {
        Some((a, b)) => Box::new(move |c: &Vector| {
            a.iter().zip(&b).map(|(a, b)| (b - a.dot(c)) / a.norm()).fold(f64::INFINITY, f64::min)
        }),
        None => {
            let dirs: Vec<(Vector, f64)> = if n == 2 {
                (0..720)
                    .map(|i| {
                        let th = 2.0 * PI * i as f64 / 720.0;
                        let u = Vector::from_column_slice(&[th.cos(), th.sin()]);
                        let h = k.h(&u);
                        (u, h)
                    })
                    .collect()
            } else {
                sample_directions(n, 720 * n, 0x1a_b0)
                    .into_iter()
                    .map(|u| {
                        let h = k.h(&u);
                        (u, h)
                    })
                    .collect()
            };
            Box::new(move |c: &Vector| dirs.iter().map(|(u, h)| h - u.dot(c)).fold(f64::INFINITY, f64::min))
        }
    };
    let x0 = vec![0.0; n];
    let m = minimize_restarting(|x: &[f64]| -depth(&(Vector::from_column_slice(x) * scale)), &x0, &cfg);
    Ok(-m.f)
}

#[derive(Debug, Clone)]
pub struct XiResult {
    pub xi: f64,
    pub inrad: f64,
    /// `4 inrad - 1e-6 <= xi <= 2 (n + 1) inrad + 1e-6`
    pub bounds_ok: bool,
    /// `xi / (sqrt(n) Vol(K)^{1/n})`, when the volume is available.
    pub volume_ratio: Option<f64>,
    pub trajectory: ClosedBilliardTrajectory,
}

/// Shortest periodic Euclidean billiard trajectory in `K`.
pub fn xi_euclidean(k: &ConvexBody, starts: usize, seed: u64) -> Result<XiResult> {
    let n = k.dim();
    let ball = ConvexBody::ball(n, 1.0)?;
    let trajectory = shortest_closed(k, &ball, n + 1, starts, seed)?;
    let xi = trajectory.length;
    let inrad = euclidean_inradius(k)?;
    let bounds_ok = 4.0 * inrad - 1e-6 <= xi && xi <= 2.0 * (n as f64 + 1.0) * inrad + 1e-6;
    let volume_ratio = volume(k, &VolumeConfig::exact())
        .ok()
        .map(|v| xi / ((n as f64).sqrt() * v.value.powf(1.0 / n as f64)));
    Ok(XiResult { xi, inrad, bounds_ok, volume_ratio, trajectory })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiards::two_bounce_shortest;
    use crate::bodies::{polar, Ellipsoid, PBall};

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    #[test]
    fn disc_prefers_diameter() {
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let tr = shortest_closed(&disc, &disc, 4, 8, 1).unwrap();
        assert!((tr.length - 4.0).abs() < 1e-6, "{}", tr.length);
        assert_eq!(tr.bounces(), 2);
        for q in &tr.bounce_points {
            assert!((disc.g(q) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn rounded_square() {
        let k = ConvexBody::from_pball(PBall::new(8.0, 1.0, 2).unwrap());
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let tr = shortest_closed(&k, &disc, 3, 8, 2).unwrap();
        assert!((tr.length - 4.0).abs() < 0.08, "{}", tr.length);
    }

    #[test]
    fn matches_two_bounce_for_symmetric_pairs() {
        let k = ConvexBody::from_ellipsoid(Ellipsoid::with_semiaxes(&[1.7, 0.9]).unwrap());
        let t = ConvexBody::from_pball(PBall::new(3.0, 1.2, 2).unwrap());
        let tr = shortest_closed(&k, &t, 3, 8, 3).unwrap();
        let two = two_bounce_shortest(&k, &t).unwrap();
        assert!((tr.length - two.length).abs() < 1e-6, "{} vs {}", tr.length, two.length);
        let closed_form = 4.0 * inradius_wrt(&k, &polar(&t).unwrap()).unwrap().r;
        assert!((tr.length - closed_form).abs() < 1e-6);
        let back = tr.reversed(&t).unwrap();
        assert!((back.length - tr.length).abs() < 1e-12);
    }

    #[test]
    fn triangle_has_fagnano_orbit() {
        // equilateral triangle with inradius 1: the Fagnano orbit joins the
        // edge midpoints, length 3 * sqrt(3), shorter than any 2-bounce orbit
        let s3 = 3f64.sqrt();
        let tri = ConvexBody::vertices_of(vec![v(&[2.0, 0.0]), v(&[-1.0, s3]), v(&[-1.0, -s3])]).unwrap();
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let tr = shortest_closed(&tri, &disc, 3, 8, 4).unwrap();
        assert!((tr.length - 3.0 * s3).abs() < 1e-6, "{}", tr.length);
        assert_eq!(tr.bounces(), 3);
    }

    #[test]
    fn xi_examples() {
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let x = xi_euclidean(&disc, 8, 0).unwrap();
        assert!((x.xi - 4.0).abs() < 1e-6 && (x.inrad - 1.0).abs() < 1e-12 && x.bounds_ok);
        let big = ConvexBody::ball(2, 2.0).unwrap();
        assert!((xi_euclidean(&big, 8, 0).unwrap().xi - 8.0).abs() < 1e-5);
        let ell = ConvexBody::from_ellipsoid(Ellipsoid::with_semiaxes(&[2.0, 1.0]).unwrap());
        let x = xi_euclidean(&ell, 8, 0).unwrap();
        assert!((x.xi - 4.0).abs() < 1e-6 && (x.inrad - 1.0).abs() < 1e-12 && x.bounds_ok);
        assert!(x.volume_ratio.is_some());
    }

    #[test]
    fn inradius_of_offset_triangle() {
        let tri = ConvexBody::vertices_of(vec![v(&[-0.5, -0.5]), v(&[2.5, -0.5]), v(&[-0.5, 2.5])]).unwrap();
        // right isosceles triangle with legs 3: r = 3 / (2 + sqrt 2)
        let r = euclidean_inradius(&tri).unwrap();
        assert!((r - 3.0 / (2.0 + 2f64.sqrt())).abs() < 1e-9, "{r}");
    }

    #[test]
    fn bad_arguments() {
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        assert!(shortest_closed(&disc, &disc, 1, 4, 0).is_err());
        assert!(shortest_closed(&disc, &ConvexBody::ball(3, 1.0).unwrap(), 3, 4, 0).is_err());
    }
}
