use super::{reflect_with, trajectory_length, ClosedBilliardTrajectory, PhasePoint, TrajectoryKind};
use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::numeric::first_crossing;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub max_bounces: usize,
    /// Distance in phase space to the first bounce state that counts as closing.
    pub closure_tol: f64,
    pub tangency_tol: f64,
    /// Longest straight segment searched for the next boundary hit.
    pub max_arc: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { max_bounces: 64, closure_tol: 1e-6, tangency_tol: super::TANGENCY_TOL, max_arc: 1e6 }
    }
}

impl FlowConfig {
    pub fn with_bounces(max_bounces: usize) -> Self {
        Self { max_bounces, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowHalt {
    /// The state after bounce `period` matches the state after the first bounce.
    Closed { period: usize },
    MaxBounces,
    Gliding { inner: f64 },
}

#[derive(Debug, Clone)]
pub struct FlowRecord {
    pub start: PhasePoint,
    /// Hit points on `∂K` with the momentum after reflection.
    pub bounces: Vec<PhasePoint>,
    pub halt: FlowHalt,
    /// Phase-space distance from the first bounce state at closure, or the
    /// smallest such distance seen when the orbit did not close.
    pub closure_residual: f64,
    pub orbit: ClosedBilliardTrajectory,
}

/// Integrates the characteristic flow on `∂(K × T)` from a point with
/// `q ∈ int K`, `p ∈ ∂T`.
pub fn flow(k: &ConvexBody, t: &ConvexBody, start: &PhasePoint, cfg: &FlowConfig) -> Result<FlowRecord> {
    for body in [k, t] {
        if !body.is_smooth() {
            return Err(Error::NonSmooth(format!("flow needs gauge gradients, got {}", body.kind())));
        }
    }
    let n = k.dim();
    if t.dim() != n || start.q.len() != n || start.p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: start.p.len().max(t.dim()) });
    }
    if (t.g(&start.p) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("start momentum has g_T(p) = {}, expected 1", t.g(&start.p))));
    }
    if !(k.g(&start.q) < 1.0) {
        return Err(Error::InvalidInput("start position must lie in the interior of K".into()));
    }
    if cfg.max_bounces == 0 || !(cfg.closure_tol > 0.0 && cfg.tangency_tol > 0.0 && cfg.max_arc > 0.0) {
        return Err(Error::InvalidInput("flow configuration values must be positive".into()));
    }

    let mut q = start.q.clone();
    let mut p = start.p.clone();
    let mut bounces: Vec<PhasePoint> = Vec::new();
    let mut residual = f64::INFINITY;
    let halt = loop {
        let v = -t.gauge_gradient(&p)?;
        let speed = v.norm();
        let reach = k.h(&(&v / speed));
        let f = |s: f64| k.g(&(&q + &v * s)) - 1.0;
        let s = first_crossing(f, 1e-7 * reach / speed, cfg.max_arc / speed, 1e-15)?;
        let hit = &q + &v * s;
        let hit = &hit / k.g(&hit);
        let normal = k.gauge_gradient(&hit)?;
        let reflection = match reflect_with(&p, &normal, t, cfg.tangency_tol) {
            Ok(r) => r,
            Err(Error::GlidingOnset { inner }) => {
                bounces.push(PhasePoint::new(hit, p));
                break FlowHalt::Gliding { inner };
            }
            Err(e) => return Err(e),
        };
        p = reflection.p;
        bounces.push(PhasePoint::new(hit.clone(), p.clone()));
        if bounces.len() >= 2 {
            let first = &bounces[0];
            let r = (&hit - &first.q).amax().max((&p - &first.p).amax());
            residual = residual.min(r);
            if r <= cfg.closure_tol {
                break FlowHalt::Closed { period: bounces.len() - 1 };
            }
        }
        if bounces.len() >= cfg.max_bounces {
            break FlowHalt::MaxBounces;
        }
        q = hit;
    };

    let (count, closed, kind) = match halt {
        FlowHalt::Closed { period } => (period, true, TrajectoryKind::Proper),
        FlowHalt::MaxBounces => (bounces.len(), false, TrajectoryKind::Proper),
        FlowHalt::Gliding { .. } => (bounces.len(), false, TrajectoryKind::GlidingSuspected),
    };
    let bounce_points: Vec<_> = bounces[..count].iter().map(|b| b.q.clone()).collect();
    let momenta = bounces[..count].iter().map(|b| b.p.clone()).collect();
    let length = if count >= 2 { trajectory_length(&bounce_points, t)? } else { 0.0 };
    let orbit = ClosedBilliardTrajectory { bounce_points, momenta, length, closed, kind };
    Ok(FlowRecord { start: start.clone(), bounces, halt, closure_residual: residual, orbit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ellipsoid, PBall, Vector};

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    #[test]
    fn diameter_orbit_in_disc() {
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let start = PhasePoint::new(v(&[0., 0.]), v(&[1., 0.]));
        let rec = flow(&disc, &disc, &start, &FlowConfig::with_bounces(10)).unwrap();
        assert_eq!(rec.halt, FlowHalt::Closed { period: 2 });
        assert!(rec.closure_residual <= 1e-6);
        assert!((rec.orbit.length - 4.0).abs() < 1e-9);
        assert!((&rec.bounces[0].q - v(&[-1., 0.])).norm() < 1e-12);
        assert!((&rec.bounces[1].q - v(&[1., 0.])).norm() < 1e-12);
    }

    #[test]
    fn boundary_adherence_in_ellipse() {
        let k = ConvexBody::from_ellipsoid(Ellipsoid::with_semiaxes(&[2.0, 1.0]).unwrap());
        let t = ConvexBody::from_pball(PBall::new(4.0, 1.0, 2).unwrap());
        let p0 = v(&[0.3, 1.0]);
        let p0 = &p0 / t.g(&p0);
        let start = PhasePoint::new(v(&[0.1, -0.2]), p0);
        let rec = flow(&k, &t, &start, &FlowConfig::with_bounces(40)).unwrap();
        assert!(rec.bounces.len() >= 2);
        for b in &rec.bounces {
            assert!((k.g(&b.q) - 1.0).abs() <= 1e-9);
            assert!((t.g(&b.p) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn polytopes_are_rejected() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let start = PhasePoint::new(v(&[0., 0.]), v(&[1., 0.]));
        assert!(matches!(flow(&sq, &disc, &start, &FlowConfig::default()), Err(Error::NonSmooth(_))));
    }

    #[test]
    fn invalid_start() {
        let disc = ConvexBody::ball(2, 1.0).unwrap();
        let off_shell = PhasePoint::new(v(&[0., 0.]), v(&[0.5, 0.]));
        assert!(flow(&disc, &disc, &off_shell, &FlowConfig::default()).is_err());
        let outside = PhasePoint::new(v(&[2., 0.]), v(&[1., 0.]));
        assert!(flow(&disc, &disc, &outside, &FlowConfig::default()).is_err());
    }
}
