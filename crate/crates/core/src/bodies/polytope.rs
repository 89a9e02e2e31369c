use std::sync::{Arc, OnceLock};

use super::hull::{convex_hull, Hull};
use super::{Vector, MAX_EXACT_DIM};
use crate::error::{Error, Result};

/// Tolerance for deduplicating normalised halfspaces and vertices.
const DEDUP_TOL: f64 = 1e-10;

/// `{x : <a_i, x> <= b_i}` with every `b_i > 0`.
///
/// Construction enumerates the vertices (through the hull of the polar points
/// `a_i / b_i`) and drops redundant halfspaces, so a value of this type is
/// always bounded and irredundant.
#[derive(Debug, Clone)]
pub struct HPolytope {
    normals: Vec<Vector>,
    offsets: Vec<f64>,
    vertices: Vec<Vector>,
    dim: usize,
    hull: Arc<OnceLock<Result<Hull>>>,
}

impl HPolytope {
    pub fn new(normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self> {
        if normals.len() != offsets.len() {
            return Err(Error::InvalidInput(format!(
                "{} normals but {} offsets",
                normals.len(),
                offsets.len()
            )));
        }
        let dim = normals.first().map(|a| a.len()).ok_or_else(|| Error::Unbounded("no halfspaces".into()))?;
        if dim > MAX_EXACT_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        for a in &normals {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
            if a.iter().any(|c| !c.is_finite()) || a.norm() == 0.0 {
                return Err(Error::InvalidInput("normals must be finite and non-zero".into()));
            }
        }
        if offsets.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(Error::OriginNotInterior);
        }
        let polar_points: Vec<Vector> = normals.iter().zip(&offsets).map(|(a, &b)| a / b).collect();
        let hull = convex_hull(&polar_points).map_err(|e| match e {
            Error::Degenerate(msg) => Error::Unbounded(msg),
            other => other,
        })?;
        if hull.facets.iter().any(|f| f.offset <= 1e-12 * hull.scale) {
            return Err(Error::Unbounded("origin is not interior to the polar point set".into()));
        }
        let keep = hull.vertices.clone();
        let normals: Vec<Vector> = keep.iter().map(|&i| normals[i].clone()).collect();
        let offsets: Vec<f64> = keep.iter().map(|&i| offsets[i]).collect();
        let vertices = dedup(hull.facets.iter().map(|f| &f.normal / f.offset).collect());
        Ok(Self { normals, offsets, vertices, dim, hull: Arc::default() })
    }

    /// Assembles a polytope whose halfspaces and vertices are already known to
    /// be irredundant and consistent.
    pub(crate) fn from_parts(normals: Vec<Vector>, offsets: Vec<f64>, vertices: Vec<Vector>) -> Self {
        let dim = normals[0].len();
        Self { normals, offsets, vertices, dim, hull: Arc::default() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Hull of the vertices, built on first use.
    pub fn hull(&self) -> Result<&Hull> {
        self.hull.get_or_init(|| convex_hull(&self.vertices)).as_ref().map_err(Clone::clone)
    }

    pub(crate) fn gauge(&self, x: &Vector) -> f64 {
        self.normals.iter().zip(&self.offsets).map(|(a, b)| a.dot(x) / b).fold(0.0, f64::max)
    }
}

/// Convex hull of a finite point set. Only extreme points are stored.
#[derive(Debug, Clone)]
pub struct VPolytope {
    vertices: Vec<Vector>,
    dim: usize,
    hull: Arc<Hull>,
    origin_interior: bool,
}

impl VPolytope {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let hull = convex_hull(&points)?;
        let vertices = hull.vertex_points();
        let origin_interior = hull.facets.iter().all(|f| f.offset > 1e-12 * hull.scale);
        Ok(Self { dim: hull.dim, vertices, hull: Arc::new(hull), origin_interior })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    pub fn origin_interior(&self) -> bool {
        self.origin_interior
    }

    /// Translates the vertex centroid to the origin.
    pub fn recentered(&self) -> Result<Self> {
        let c = self.vertices.iter().fold(Vector::zeros(self.dim), |acc, v| acc + v) / self.vertices.len() as f64;
        Self::new(self.vertices.iter().map(|v| v - &c).collect())
    }

    pub(crate) fn gauge(&self, x: &Vector) -> f64 {
        let mut g: f64 = 0.0;
        for f in &self.hull.facets {
            let t = f.normal.dot(x);
            if f.offset > 0.0 {
                g = g.max(t / f.offset);
            } else if t > 0.0 {
                return f64::INFINITY;
            }
        }
        g
    }
}

pub(crate) fn max_dot(points: &[Vector], u: &Vector) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, v) in points.iter().enumerate() {
        let t = v.dot(u);
        if t > best.0 {
            best = (t, i);
        }
    }
    best
}

pub(crate) fn dedup(points: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        let scale = p.amax().max(1.0);
        if !out.iter().any(|q| (q - &p).amax() <= DEDUP_TOL * scale) {
            out.push(p);
        }
    }
    out
}

/// True when the point set equals its own negative up to `tol`.
pub(crate) fn symmetric_point_set(points: &[Vector], tol: f64) -> bool {
    points.iter().all(|v| points.iter().any(|w| (v + w).amax() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    #[test]
    fn square_from_halfspaces_drops_redundant() {
        let normals = vec![v(&[1., 0.]), v(&[0., 1.]), v(&[-1., 0.]), v(&[0., -1.]), v(&[1., 1.]), v(&[2., 0.])];
        let h = HPolytope::new(normals, vec![1., 1., 1., 1., 5., 2.]).unwrap();
        assert_eq!(h.normals().len(), 4);
        assert_eq!(h.vertices().len(), 4);
        assert!((h.hull().unwrap().volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_halfspace_is_unbounded() {
        assert!(matches!(HPolytope::new(vec![v(&[1., 0.])], vec![1.]), Err(Error::Unbounded(_))));
    }

    #[test]
    fn half_plane_pair_is_unbounded() {
        let r = HPolytope::new(vec![v(&[1., 0.]), v(&[-1., 0.]), v(&[0., 1.])], vec![1., 1., 1.]);
        assert!(matches!(r, Err(Error::Unbounded(_))));
    }

    #[test]
    fn nonpositive_offset_rejected() {
        let r = HPolytope::new(vec![v(&[1., 0.]), v(&[-1., 0.])], vec![1., 0.]);
        assert_eq!(r.unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn triangle_off_origin() {
        let t = VPolytope::new(vec![v(&[0., 0.]), v(&[1., 0.]), v(&[0., 1.])]).unwrap();
        assert!(!t.origin_interior());
        let c = t.recentered().unwrap();
        assert!(c.origin_interior());
    }
}
