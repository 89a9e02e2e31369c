#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;

use symlab::bodies::{Ellipsoid, PBall};
use symlab::{rng, ConvexBody};

/// Rotated ellipse with semi-axes in `[0.5, 2]`.
pub fn random_ellipse(seed: u64) -> ConvexBody {
    let mut s = rng::stream(seed, 0);
    let (a, b): (f64, f64) = (s.random_range(0.5..2.0), s.random_range(0.5..2.0));
    let th: f64 = s.random_range(0.0..std::f64::consts::PI);
    let r = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 / (a * a), 1.0 / (b * b)]));
    let q = &r * d * r.transpose();
    let q = (&q + q.transpose()) * 0.5;
    ConvexBody::from_ellipsoid(Ellipsoid::new(q).unwrap())
}

/// Planar l^p ball with `p` in `[2, 6]` and radius in `[0.5, 2]`.
pub fn random_pball(seed: u64) -> ConvexBody {
    let mut s = rng::stream(seed, 1);
    ConvexBody::from_pball(PBall::new(s.random_range(2.0..6.0), s.random_range(0.5..2.0), 2).unwrap())
}

/// Smooth centrally symmetric planar pair; the kinds cycle with `seed`.
pub fn random_smooth_pair(seed: u64) -> (ConvexBody, ConvexBody) {
    let pick = |s: u64| if s.is_multiple_of(2) { random_ellipse(s) } else { random_pball(s) };
    let a = rng::derive_seed(seed, 0);
    let b = rng::derive_seed(seed, 1);
    (pick(a), pick(b))
}
