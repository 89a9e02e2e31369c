//! Incremental beneath–beyond convex hull in dimensions 1 through 8.
//!
//! The hull is kept as a triangulated boundary: every simplicial facet is a
//! `d`-subset of the input points together with its outward hyperplane.
//! Coplanar simplices are merged afterwards into the true facets, and a point
//! counts as a vertex only when the facets through it have normals of full
//! rank.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::MAX_EXACT_DIM;
use crate::error::{Error, Result};

/// Relative tolerance for the beyond/beneath decision.
const COPLANAR_TOL: f64 = 1e-12;
/// Tolerance used to merge simplices into facets.
const MERGE_TOL: f64 = 1e-10;
/// Tolerance for the final containment check.
const VALIDATE_TOL: f64 = 1e-9;
/// Relative perturbation sizes tried when the exact triangulation fails.
const JOGGLE: [f64; 4] = [1e-11, 1e-10, 1e-9, 1e-8];
/// Boundary simplices thinner than this (relative) carry no facet normal.
const FLAT_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct Simplex {
    pub verts: Vec<usize>,
    pub normal: DVector<f64>,
    pub offset: f64,
    /// Index into [`Hull::facets`].
    pub facet: usize,
}

/// A facet `normal · x <= offset` with unit normal.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: DVector<f64>,
    pub offset: f64,
    /// Indices of input points that are vertices of this facet.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub points: Vec<DVector<f64>>,
    pub simplices: Vec<Simplex>,
    pub facets: Vec<Facet>,
    /// Indices of the extreme input points, ascending.
    pub vertices: Vec<usize>,
    pub interior: DVector<f64>,
    pub scale: f64,
}

impl Hull {
    /// Volume by the fan of simplices over an interior point.
    pub fn volume(&self) -> f64 {
        let d = self.dim;
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        let mut total = 0.0;
        for s in &self.simplices {
            let m = DMatrix::from_fn(d, d, |r, c| self.points[s.verts[c]][r] - self.interior[r]);
            total += m.determinant().abs();
        }
        total / fact
    }

    pub fn vertex_points(&self) -> Vec<DVector<f64>> {
        self.vertices.iter().map(|&i| self.points[i].clone()).collect()
    }
}

/// Outward unit normal and offset of the hyperplane through `verts`, and
/// the second-smallest singular value of the edge matrix (zero when the
/// simplex is flat).
fn hyperplane(pts: &[DVector<f64>], verts: &[usize], interior: &DVector<f64>) -> Result<(DVector<f64>, f64, f64)> {
    let d = interior.len();
    let base = &pts[verts[0]];
    let mut m = DMatrix::zeros(d, d);
    for (r, &v) in verts.iter().enumerate().skip(1) {
        for c in 0..d {
            m[(r - 1, c)] = pts[v][c] - base[c];
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut normal: DVector<f64> = v_t.row(order[0]).transpose();
    normal /= normal.norm();
    let mut offset = normal.dot(base);
    if normal.dot(interior) > offset {
        normal = -normal;
        offset = -offset;
    }
    let spread = if d >= 2 { svd.singular_values[order[1]] } else { f64::INFINITY };
    Ok((normal, offset, spread))
}

struct Builder<'a> {
    pts: &'a [DVector<f64>],
    interior: DVector<f64>,
    eps: f64,
    scale: f64,
    widen: bool,
    /// Vertices, outward normal, offset and visibility tolerance.
    simplices: Vec<Option<(Vec<usize>, DVector<f64>, f64, f64)>>,
    ridges: HashMap<Vec<usize>, Vec<usize>>,
}

impl Builder<'_> {
    fn add(&mut self, mut verts: Vec<usize>) -> Result<()> {
        verts.sort_unstable();
        let (normal, offset, spread) = hyperplane(self.pts, &verts, &self.interior)?;
        // a thin simplex has a poorly determined normal; widen its band
        let tol = if self.widen { self.eps * (self.scale / spread).max(1.0) } else { self.eps };
        let id = self.simplices.len();
        for skip in 0..verts.len() {
            let ridge: Vec<usize> =
                verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            self.ridges.entry(ridge).or_default().push(id);
        }
        self.simplices.push(Some((verts, normal, offset, tol)));
        Ok(())
    }

    fn remove(&mut self, id: usize) {
        if let Some((verts, ..)) = self.simplices[id].take() {
            for skip in 0..verts.len() {
                let ridge: Vec<usize> =
                    verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                if let Some(list) = self.ridges.get_mut(&ridge) {
                    list.retain(|&s| s != id);
                    if list.is_empty() {
                        self.ridges.remove(&ridge);
                    }
                }
            }
        }
    }

    /// Adds point `p`; `Ok(false)` when rounding has broken the boundary.
    fn insert(&mut self, p: usize) -> Result<bool> {
        let x = &self.pts[p];
        let visible: Vec<usize> = self
            .simplices
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().filter(|(_, n, o, tol)| n.dot(x) - o > *tol).map(|_| i))
            .collect();
        if visible.is_empty() {
            return Ok(true);
        }
        let is_visible = |i: usize| visible.binary_search(&i).is_ok();
        let mut horizon = Vec::new();
        for &s in &visible {
            let verts = self.simplices[s].as_ref().expect("alive").0.clone();
            for skip in 0..verts.len() {
                let ridge: Vec<usize> =
                    verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let across = self.ridges.get(&ridge).and_then(|l| l.iter().copied().find(|&o| o != s));
                match across {
                    Some(o) if !is_visible(o) => horizon.push(ridge),
                    Some(_) => {}
                    None => return Ok(false),
                }
            }
        }
        for &s in &visible {
            self.remove(s);
        }
        for mut ridge in horizon {
            ridge.push(p);
            self.add(ridge)?;
        }
        Ok(true)
    }
}

/// Picks `d + 1` affinely independent points greedily by distance to the
/// affine hull of those already chosen.
fn initial_simplex(pts: &[DVector<f64>], d: usize, tol: f64) -> Result<Vec<usize>> {
    let (mut lo, mut hi) = (0usize, 0usize);
    for (i, p) in pts.iter().enumerate() {
        if p[0] < pts[lo][0] {
            lo = i;
        }
        if p[0] > pts[hi][0] {
            hi = i;
        }
    }
    let mut chosen = vec![lo];
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let origin = pts[lo].clone();
    let residual = |p: &DVector<f64>, basis: &[DVector<f64>]| {
        let mut r = p - &origin;
        for b in basis {
            let c = r.dot(b);
            r -= b * c;
        }
        r
    };
    if hi != lo {
        chosen.push(hi);
        let r = residual(&pts[hi], &basis);
        if r.norm() > tol {
            basis.push(r.normalize());
        }
    }
    while chosen.len() < d + 1 {
        let mut best = (0.0, usize::MAX);
        for (i, p) in pts.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let dist = residual(p, &basis).norm();
            if dist > best.0 {
                best = (dist, i);
            }
        }
        if best.1 == usize::MAX || best.0 <= tol {
            return Err(Error::Degenerate(format!(
                "points span an affine subspace of dimension {} < {d}",
                basis.len()
            )));
        }
        let r = residual(&pts[best.1], &basis);
        basis.push(r.normalize());
        chosen.push(best.1);
    }
    if basis.len() < d {
        return Err(Error::Degenerate("points are not full-dimensional".into()));
    }
    Ok(chosen)
}

fn interval_hull(points: &[DVector<f64>]) -> Result<Hull> {
    let (mut lo, mut hi) = (0usize, 0usize);
    for (i, p) in points.iter().enumerate() {
        if p[0] < points[lo][0] {
            lo = i;
        }
        if p[0] > points[hi][0] {
            hi = i;
        }
    }
    let scale = (points[hi][0] - points[lo][0]).abs();
    if scale <= 0.0 {
        return Err(Error::Degenerate("interval has zero length".into()));
    }
    let interior = DVector::from_element(1, 0.5 * (points[lo][0] + points[hi][0]));
    let plus = DVector::from_element(1, 1.0);
    let minus = DVector::from_element(1, -1.0);
    let facets = vec![
        Facet { normal: plus.clone(), offset: points[hi][0], vertices: vec![hi] },
        Facet { normal: minus.clone(), offset: -points[lo][0], vertices: vec![lo] },
    ];
    let simplices = vec![
        Simplex { verts: vec![hi], normal: plus, offset: points[hi][0], facet: 0 },
        Simplex { verts: vec![lo], normal: minus, offset: -points[lo][0], facet: 1 },
    ];
    let mut vertices = vec![lo, hi];
    vertices.sort_unstable();
    Ok(Hull { dim: 1, points: points.to_vec(), simplices, facets, vertices, interior, scale })
}

/// Triangulated boundary of the hull, or `None` when rounding broke its
/// topology. With `widen`, the visibility band of each simplex grows with
/// its thinness.
#[allow(clippy::type_complexity)]
fn boundary(points: &[DVector<f64>], scale: f64, widen: bool) -> Result<Option<(Vec<Vec<usize>>, DVector<f64>)>> {
    let d = points[0].len();
    let init = initial_simplex(points, d, 1e-9 * scale)?;
    let interior = init.iter().fold(DVector::zeros(d), |acc, &i| acc + &points[i]) / (d + 1) as f64;
    let mut b = Builder {
        pts: points,
        interior: interior.clone(),
        eps: COPLANAR_TOL * scale,
        scale,
        widen,
        simplices: Vec::new(),
        ridges: HashMap::new(),
    };
    for skip in 0..=d {
        let face: Vec<usize> = init.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        b.add(face)?;
    }

    let mut order: Vec<usize> = (0..points.len()).filter(|i| !init.contains(i)).collect();
    let dist: Vec<f64> = points.iter().map(|p| (p - &interior).norm()).collect();
    order.sort_by(|&a, &c| dist[c].total_cmp(&dist[a]).then(a.cmp(&c)));
    for p in order {
        if !b.insert(p)? {
            return Ok(None);
        }
    }
    if b.ridges.values().any(|l| l.len() != 2) {
        return Ok(None);
    }
    Ok(Some((b.simplices.into_iter().flatten().map(|(v, ..)| v).collect(), interior)))
}

/// Deterministic perturbation of every coordinate by up to `size * scale`.
fn joggle(points: &[DVector<f64>], scale: f64, attempt: usize, size: f64) -> Vec<DVector<f64>> {
    use rand::Rng;
    let mut s = crate::rng::stream(0x4a_4f_47, attempt as u64);
    points.iter().map(|p| p.map(|c| c + size * scale * (2.0 * s.random::<f64>() - 1.0))).collect()
}

/// Convex hull of a full-dimensional point set.
pub fn convex_hull(points: &[DVector<f64>]) -> Result<Hull> {
    let d = points.first().map(|p| p.len()).ok_or_else(|| Error::Degenerate("no points".into()))?;
    if d == 0 {
        return Err(Error::Degenerate("zero-dimensional points".into()));
    }
    if d > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge(d));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    if points.len() < d + 1 {
        return Err(Error::Degenerate(format!("{} points cannot span dimension {d}", points.len())));
    }
    if d == 1 {
        return interval_hull(points);
    }

    let scale = (0..d)
        .map(|k| {
            let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[k]), hi.max(p[k]))
            });
            hi - lo
        })
        .fold(0.0, f64::max);
    if scale <= 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }

    // Near-coplanar clusters (typical of polars of simplicial polytopes) can
    // break the exact triangulation; retry on perturbed copies, keeping the
    // combinatorics and recomputing every hyperplane from the original points.
    let mut last = None;
    for attempt in 0..2 * (JOGGLE.len() + 1) {
        let (level, widen) = (attempt / 2, attempt % 2 == 1);
        let found = if level == 0 {
            boundary(points, scale, widen)?
        } else {
            boundary(&joggle(points, scale, level, JOGGLE[level - 1]), scale, widen)?
        };
        let Some((triangulation, interior)) = found else { continue };
        match finish(points, triangulation, interior, scale) {
            Ok(h) => return Ok(h),
            Err(e @ Error::Degenerate(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::Degenerate("numerically degenerate input: hull boundary is not a closed manifold".into())
    }))
}

fn finish(points: &[DVector<f64>], triangulation: Vec<Vec<usize>>, interior: DVector<f64>, scale: f64) -> Result<Hull> {
    let d = interior.len();
    let mut planes = Vec::with_capacity(triangulation.len());
    for verts in triangulation {
        let (normal, offset, spread) = hyperplane(points, &verts, &interior)?;
        planes.push((verts, normal, offset, spread > FLAT_TOL * scale));
    }

    // merge coplanar simplices into facets
    let mut facets: Vec<Facet> = Vec::new();
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut simplices = Vec::new();
    let mut flat = Vec::new();
    for (verts, normal, offset, proper) in planes {
        if !proper {
            // slivers from a joggled triangulation: volume only
            flat.push((verts, normal, offset));
            continue;
        }
        let key: Vec<i64> = normal.iter().map(|c| (c * 1e8).round() as i64).collect();
        let bucket = buckets.entry(key).or_default();
        let found = bucket.iter().copied().find(|&f| {
            let fac: &Facet = &facets[f];
            (&fac.normal - &normal).amax() <= MERGE_TOL && (fac.offset - offset).abs() <= MERGE_TOL * scale
        });
        let facet = match found {
            Some(f) => f,
            None => {
                facets.push(Facet { normal: normal.clone(), offset, vertices: Vec::new() });
                bucket.push(facets.len() - 1);
                facets.len() - 1
            }
        };
        simplices.push(Simplex { verts, normal, offset, facet });
    }

    for (verts, normal, offset) in flat {
        let facet = facets
            .iter()
            .position(|f| verts.iter().all(|&v| (f.normal.dot(&points[v]) - f.offset).abs() <= VALIDATE_TOL * scale))
            .ok_or_else(|| Error::Degenerate("numerically degenerate input: flat boundary simplex".into()))?;
        simplices.push(Simplex { verts, normal, offset, facet });
    }

    for p in points {
        for f in &facets {
            if f.normal.dot(p) - f.offset > VALIDATE_TOL * scale {
                return Err(Error::Degenerate("numerically degenerate input: hull fails containment".into()));
            }
        }
    }

    // extreme points: incident facet normals have full rank
    let mut candidates: Vec<usize> = simplices.iter().flat_map(|s| s.verts.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let on_tol = 1e-9 * scale;
    let mut vertices = Vec::new();
    for &v in &candidates {
        let incident: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| (f.normal.dot(&points[v]) - f.offset).abs() <= on_tol)
            .map(|(i, _)| i)
            .collect();
        if incident.len() < d {
            continue;
        }
        let m = DMatrix::from_fn(incident.len(), d, |r, c| facets[incident[r]].normal[c]);
        let sv = m.singular_values();
        if sv.iter().filter(|&&s| s > 1e-9).count() == d {
            vertices.push(v);
            for f in incident {
                facets[f].vertices.push(v);
            }
        }
    }

    Ok(Hull { dim: d, points: points.to_vec(), simplices, facets, vertices, interior, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[&[f64]]) -> Vec<DVector<f64>> {
        rows.iter().map(|r| DVector::from_column_slice(r)).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[&[1., 1.], &[-1., 1.], &[-1., -1.], &[1., -1.], &[0., 0.], &[1., 0.], &[0.2, 0.3]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
        assert!((h.volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cube_3d() {
        let mut p = Vec::new();
        for s in 0..8 {
            let c = |b: usize| if s >> b & 1 == 1 { 1.0 } else { -1.0 };
            p.push(DVector::from_vec(vec![c(0), c(1), c(2)]));
        }
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.vertices.len(), 8);
        assert!((h.volume() - 8.0).abs() < 1e-12);
        for f in &h.facets {
            assert_eq!(f.vertices.len(), 4);
        }
    }

    #[test]
    fn cross_polytope_4d() {
        let mut p = Vec::new();
        for i in 0..4 {
            for s in [1.0, -1.0] {
                let mut v = DVector::zeros(4);
                v[i] = s;
                p.push(v);
            }
        }
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.facets.len(), 16);
        assert!((h.volume() - 16.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn flat_input_is_rejected() {
        let p = pts(&[&[0., 0., 0.], &[1., 0., 0.], &[0., 1., 0.], &[1., 1., 0.]]);
        assert!(matches!(convex_hull(&p), Err(Error::Degenerate(_))));
    }

    #[test]
    fn interval() {
        let p = pts(&[&[-1.], &[0.5], &[2.]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices, vec![0, 2]);
        assert!((h.volume() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn too_many_dimensions() {
        let p: Vec<_> = (0..10).map(|i| DVector::from_element(9, i as f64)).collect();
        assert!(matches!(convex_hull(&p), Err(Error::DimensionTooLarge(9))));
    }
    #[test]
    fn clustered_dual_vertices() {
        // facet points of a random symmetric polytope, three of them within 1e-4
        let half = [
            [-1.990_312_260_075_103_3e-1, -2.068_776_168_507_317_8e-1, -1.258_421_370_731_571e-1],
            [1.344_285_817_677_841e-1, -1.952_463_199_425_237e-1, -3.901_899_425_392_646_4e-1],
            [6.110_467_085_312_542e-1, -1.627_082_017_045_429e-1, 7.504_811_633_708_025e-1],
            [1.992_077_480_595_376_4e-1, -1.914_080_952_911_430_3e-1, -2.908_997_553_695_226e-1],
            [5.642_304_791_812_081e-1, -1.870_067_106_434_249_5e-2, 4.267_672_373_326_674e-1],
            [4.539_805_210_476_254_3e-1, -1.681_867_733_892_401e-1, 8.749_942_261_330_889e-1],
            [4.538_912_786_045_904e-1, -1.681_913_632_895_719_3e-1, 8.749_240_258_980_546e-1],
            [4.538_954_767_882_738_6e-1, -1.681_529_277_695_243e-1, 8.749_704_418_626_255e-1],
        ];
        let p: Vec<DVector<f64>> =
            half.iter().flat_map(|r| [DVector::from_column_slice(r), -DVector::from_column_slice(r)]).collect();
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices.len(), 16);
        assert_eq!(h.facets.len(), 10);
        let (c, s) = (0.6f64, 0.8f64);
        let rot = DMatrix::from_row_slice(3, 3, &[c, -s, 0., s, c, 0., 0., 0., 1.]);
        let turned: Vec<DVector<f64>> = p.iter().map(|x| &rot * x).collect();
        let v = h.volume();
        assert!((convex_hull(&turned).unwrap().volume() - v).abs() <= 1e-9 * v);
    }

}
