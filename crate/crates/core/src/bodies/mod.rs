//! Convex bodies: representations, support and gauge evaluation, polarity,
//! sums and products, inradius relative to another body.
//!
//! Every operation that touches the gauge or polarity requires the origin to
//! lie strictly inside the body. Nothing is recentred behind the caller's
//! back; [`VPolytope::recentered`] translates a polytope explicitly. For
//! bodies that are not centrally symmetric the Mahler volume depends on that
//! choice of origin.

pub mod hanner;
pub mod hull;
mod inradius;
mod ops;
mod oracle;
mod polytope;
mod random;
mod smooth;

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

pub use hanner::HannerTree;
pub use inradius::{inradius_wrt, Inradius};
pub use ops::{convert, direct_product, free_sum, linear_image, minkowski_sum, polar, scaled, RepKind};
pub use oracle::{ScalarFn, SupportOracle, VectorFn};
pub use polytope::{HPolytope, VPolytope};
pub use random::random_symmetric_polytope;
pub use smooth::{unit_ball_volume, Ellipsoid, PBall};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

/// Largest dimension handled by exact facet and vertex enumeration.
pub const MAX_EXACT_DIM: usize = 8;

/// Relative tolerance for the sampled central-symmetry check.
const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum Rep {
    H(HPolytope),
    V(VPolytope),
    Ellipsoid(Ellipsoid),
    PBall(PBall),
    Oracle(SupportOracle),
}

/// A compact convex set with non-empty interior.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    rep: Arc<Rep>,
    symmetric: bool,
}

impl ConvexBody {
    pub fn from_hpoly(h: HPolytope) -> Self {
        let symmetric = polytope::symmetric_point_set(h.vertices(), SYMMETRY_TOL * scale_of(h.vertices()));
        Self { rep: Arc::new(Rep::H(h)), symmetric }
    }

    pub fn from_vpoly(v: VPolytope) -> Self {
        let symmetric = polytope::symmetric_point_set(v.vertices(), SYMMETRY_TOL * scale_of(v.vertices()));
        Self { rep: Arc::new(Rep::V(v)), symmetric }
    }

    pub fn from_ellipsoid(e: Ellipsoid) -> Self {
        Self { rep: Arc::new(Rep::Ellipsoid(e)), symmetric: true }
    }

    pub fn from_pball(b: PBall) -> Self {
        Self { rep: Arc::new(Rep::PBall(b)), symmetric: true }
    }

    /// Wraps an oracle. A `symmetric` claim is checked on sampled directions.
    pub fn from_oracle(o: SupportOracle, symmetric: bool) -> Result<Self> {
        let body = Self { rep: Arc::new(Rep::Oracle(o)), symmetric: false };
        if symmetric {
            body.claim_symmetric()
        } else {
            Ok(body)
        }
    }

    pub fn vertices_of(points: Vec<Vector>) -> Result<Self> {
        Ok(Self::from_vpoly(VPolytope::new(points)?))
    }

    pub fn halfspaces_of(normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self> {
        Ok(Self::from_hpoly(HPolytope::new(normals, offsets)?))
    }

    /// `[-r, r]^n` as a V-polytope.
    pub fn cube(n: usize, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidInput(format!("cube half-width must be positive, got {r}")));
        }
        let pts = (0..1usize << n)
            .map(|s| Vector::from_fn(n, |i, _| if s >> i & 1 == 1 { r } else { -r }))
            .collect();
        Self::vertices_of(pts)
    }

    /// Unit l1 ball as a V-polytope.
    pub fn cross_polytope(n: usize) -> Result<Self> {
        let mut pts = Vec::with_capacity(2 * n);
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut e = Vector::zeros(n);
                e[i] = s;
                pts.push(e);
            }
        }
        Self::vertices_of(pts)
    }

    pub fn ball(n: usize, r: f64) -> Result<Self> {
        Ok(Self::from_ellipsoid(Ellipsoid::ball(n, r)?))
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn kind(&self) -> &'static str {
        match *self.rep {
            Rep::H(_) => "hpoly",
            Rep::V(_) => "vpoly",
            Rep::Ellipsoid(_) => "ellipsoid",
            Rep::PBall(_) => "pball",
            Rep::Oracle(_) => "oracle",
        }
    }

    pub fn dim(&self) -> usize {
        match &*self.rep {
            Rep::H(h) => h.dim(),
            Rep::V(v) => v.dim(),
            Rep::Ellipsoid(e) => e.dim(),
            Rep::PBall(b) => b.dim,
            Rep::Oracle(o) => o.dim,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Marks the body centrally symmetric after checking `h(u) = h(-u)` on
    /// sampled directions (exact vertex-set check for polytopes).
    pub fn claim_symmetric(mut self) -> Result<Self> {
        if self.symmetric {
            return Ok(self);
        }
        if self.is_polytope() {
            return Err(Error::NotSymmetric);
        }
        for u in sample_directions(self.dim(), 64, 0x53_59_4d) {
            let (a, b) = (self.h(&u), self.h(&-&u));
            if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1e-300) {
                return Err(Error::NotSymmetric);
            }
        }
        self.symmetric = true;
        Ok(self)
    }

    pub fn is_polytope(&self) -> bool {
        matches!(*self.rep, Rep::H(_) | Rep::V(_))
    }

    /// Whether a gauge gradient oracle is available.
    pub fn is_smooth(&self) -> bool {
        match &*self.rep {
            Rep::Ellipsoid(_) => true,
            Rep::PBall(b) => b.p >= 2.0,
            Rep::Oracle(o) => o.gauge_gradient().is_some(),
            _ => false,
        }
    }

    pub fn origin_interior(&self) -> bool {
        match &*self.rep {
            Rep::V(v) => v.origin_interior(),
            _ => true,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// Support function `h_K(u) = sup_{x in K} <x, u>`.
    pub fn support(&self, u: &Vector) -> Result<f64> {
        self.check_dim(u)?;
        Ok(self.h(u))
    }

    /// Unchecked support function.
    pub fn h(&self, u: &Vector) -> f64 {
        debug_assert_eq!(u.len(), self.dim());
        match &*self.rep {
            Rep::H(h) => polytope::max_dot(h.vertices(), u).0,
            Rep::V(v) => polytope::max_dot(v.vertices(), u).0,
            Rep::Ellipsoid(e) => e.support(u),
            Rep::PBall(b) => b.support(u),
            Rep::Oracle(o) => o.support(u),
        }
    }

    /// Gauge `g_K(x) = inf {r >= 0 : x in rK}`.
    pub fn gauge(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        if !self.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(self.g(x))
    }

    /// Unchecked gauge.
    pub fn g(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        match &*self.rep {
            Rep::H(h) => h.gauge(x),
            Rep::V(v) => v.gauge(x),
            Rep::Ellipsoid(e) => e.gauge(x),
            Rep::PBall(b) => b.gauge(x),
            Rep::Oracle(o) => o.gauge(x),
        }
    }

    /// Gradient of the gauge at `x != 0`.
    pub fn gauge_gradient(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        if x.norm() == 0.0 {
            return Err(Error::InvalidInput("gauge gradient undefined at the origin".into()));
        }
        match &*self.rep {
            Rep::Ellipsoid(e) => Ok(e.gauge_gradient(x)),
            Rep::PBall(b) if b.p >= 2.0 => Ok(b.gauge_gradient(x)),
            Rep::Oracle(o) => match o.gauge_gradient() {
                Some(grad) => Ok(grad(x)),
                None => Err(Error::NonSmooth(format!("oracle '{}' has no gauge gradient", o.label))),
            },
            _ => Err(Error::NonSmooth(format!("{} has no gauge gradient", self.kind()))),
        }
    }

    /// A point of `K` maximising `<x, u>` (lowest vertex index on ties).
    pub fn support_point(&self, u: &Vector) -> Vector {
        match &*self.rep {
            Rep::H(h) => h.vertices()[polytope::max_dot(h.vertices(), u).1].clone(),
            Rep::V(v) => v.vertices()[polytope::max_dot(v.vertices(), u).1].clone(),
            Rep::Ellipsoid(e) => e.support_point(u),
            Rep::PBall(b) => b.support_point(u),
            Rep::Oracle(o) => {
                // central differences of h, which is differentiable where the
                // support point is unique
                let step = 1e-6 * u.norm().max(1e-12);
                Vector::from_fn(u.len(), |i, _| {
                    let mut a = u.clone();
                    let mut b = u.clone();
                    a[i] += step;
                    b[i] -= step;
                    (o.support(&a) - o.support(&b)) / (2.0 * step)
                })
            }
        }
    }

    /// Vertex list for polytopes.
    pub fn vertices(&self) -> Option<&[Vector]> {
        match &*self.rep {
            Rep::H(h) => Some(h.vertices()),
            Rep::V(v) => Some(v.vertices()),
            _ => None,
        }
    }

    /// Halfspaces `<a_i, x> <= b_i` for polytopes. V-polytopes report the unit
    /// facet normals of their hull.
    pub fn halfspaces(&self) -> Option<(Vec<Vector>, Vec<f64>)> {
        match &*self.rep {
            Rep::H(h) => Some((h.normals().to_vec(), h.offsets().to_vec())),
            Rep::V(v) => Some((
                v.hull().facets.iter().map(|f| f.normal.clone()).collect(),
                v.hull().facets.iter().map(|f| f.offset).collect(),
            )),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.g(x) <= 1.0 + tol
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in R^{}", self.kind(), self.dim())?;
        match &*self.rep {
            Rep::H(h) => write!(f, ", {} halfspaces, {} vertices", h.normals().len(), h.vertices().len())?,
            Rep::V(v) => write!(f, ", {} vertices, {} facets", v.vertices().len(), v.hull().facets.len())?,
            Rep::Ellipsoid(_) => {}
            Rep::PBall(b) => write!(f, ", p = {}, radius = {}", b.p, b.radius)?,
            Rep::Oracle(o) => write!(f, ", {}", o.label)?,
        }
        if self.symmetric {
            write!(f, ", centrally symmetric")?;
        }
        Ok(())
    }
}

fn scale_of(points: &[Vector]) -> f64 {
    points.iter().map(|p| p.amax()).fold(0.0, f64::max).max(1e-300)
}

/// Deterministic unit directions: the coordinate axes and diagonals first,
/// then seeded Gaussian directions.
pub fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut out = Vec::with_capacity(count);
    for i in 0..n.min(count) {
        let mut e = Vector::zeros(n);
        e[i] = 1.0;
        out.push(e);
    }
    let mut rng = crate::rng::stream(seed, n as u64);
    while out.len() < count {
        let d = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = d.norm();
        if norm > 1e-12 {
            out.push(d / norm);
        }
    }
    out
}

/// `i (q, p) = (-p, q)` on `R^{2n}` with coordinates `(q_1..q_n, p_1..p_n)`.
pub fn complex_structure(x: &Vector) -> Vector {
    let n = x.len() / 2;
    Vector::from_fn(x.len(), |k, _| if k < n { -x[k + n] } else { x[k - n] })
}

/// Whether `K = iK` for the standard complex structure.
pub fn is_quarter_symmetric(k: &ConvexBody) -> Result<bool> {
    let d = k.dim();
    if !d.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("K = iK needs even dimension, got {d}")));
    }
    if let Some(vs) = k.vertices() {
        let tol = SYMMETRY_TOL * scale_of(vs);
        return Ok(vs.iter().all(|v| {
            let iv = complex_structure(v);
            vs.iter().any(|w| (w - &iv).amax() <= tol)
        }));
    }
    Ok(sample_directions(d, 200, 0x69_4b).iter().all(|u| {
        let (a, b) = (k.h(u), k.h(&complex_structure(u)));
        (a - b).abs() <= SYMMETRY_TOL * a.abs().max(b.abs()).max(1e-300)
    }))
}
