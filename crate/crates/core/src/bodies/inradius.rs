use super::{ConvexBody, Rep, Vector};
use crate::error::{Error, Result};
use crate::numeric::minimize_on_sphere;

/// Relative band within which facets count as tied for the minimum.
const TIE_TOL: f64 = 1e-12;

/// `inrad_T(K) = max {r : rT ⊆ K}` with a contact point on `∂K ∩ r∂T`.
#[derive(Debug, Clone)]
pub struct Inradius {
    pub r: f64,
    pub contact: Vector,
    /// Index of the facet of `K` realising the minimum, when `K` is a polytope.
    pub facet: Option<usize>,
    /// Index of the vertex of `T` realising the minimum, when `T` is a polytope
    /// and `K` is not.
    pub vertex: Option<usize>,
}

/// Largest `r` with `rT ⊆ K`.
///
/// Exact when `K` is a polytope (`min_i b_i / h_T(a_i)`), when `T` is a
/// polytope (`1 / max_j g_K(t_j)`), and for two ellipsoids (generalised
/// eigenvalue); otherwise `min_d g_T(d) / g_K(d)` over unit directions.
/// Ties go to the lowest facet or vertex index.
pub fn inradius_wrt(k: &ConvexBody, t: &ConvexBody) -> Result<Inradius> {
    if k.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: t.dim() });
    }
    if !k.origin_interior() || !t.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    if let Some((normals, offsets)) = k.halfspaces() {
        let mut ratios = Vec::with_capacity(normals.len());
        for (a, b) in normals.iter().zip(&offsets) {
            let h = t.h(a);
            if !(h > 0.0) {
                return Err(Error::Degenerate("T has non-positive support".into()));
            }
            ratios.push(b / h);
        }
        let r = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let i = ratios.iter().position(|&x| x <= r * (1.0 + TIE_TOL)).expect("non-empty");
        let contact = t.support_point(&normals[i]) * r;
        return Ok(Inradius { r, contact, facet: Some(i), vertex: None });
    }
    if let Some(vs) = t.vertices() {
        let gauges: Vec<f64> = vs.iter().map(|v| k.g(v)).collect();
        let g = gauges.iter().copied().fold(0.0, f64::max);
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Degenerate("K has degenerate gauge".into()));
        }
        let j = gauges.iter().position(|&x| x >= g * (1.0 - TIE_TOL)).expect("non-empty");
        let r = 1.0 / g;
        return Ok(Inradius { r, contact: &vs[j] * r, facet: None, vertex: Some(j) });
    }
    if let (Rep::Ellipsoid(ek), Rep::Ellipsoid(et)) = (k.rep(), t.rep()) {
        // max x^T Q_K x over x^T Q_T x = 1 is the top eigenvalue of L^-1 Q_K L^-T
        let l = et
            .shape()
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Degenerate("shape matrix not positive definite".into()))?
            .l();
        let l_inv = l.try_inverse().ok_or_else(|| Error::Degenerate("singular Cholesky factor".into()))?;
        let c = &l_inv * ek.shape() * l_inv.transpose();
        let eig = ((&c + c.transpose()) * 0.5).symmetric_eigen();
        let (idx, lmax) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, l)| if l > acc.1 { (i, l) } else { acc });
        let r = 1.0 / lmax.sqrt();
        let w: Vector = eig.eigenvectors.column(idx).into_owned();
        let x = l_inv.transpose() * w;
        let contact = &x / k.g(&x);
        return Ok(Inradius { r, contact, facet: None, vertex: None });
    }
    let (r, d) = minimize_on_sphere(k.dim(), |d| t.g(d) / k.g(d));
    let contact = &d / k.g(&d);
    Ok(Inradius { r, contact, facet: None, vertex: None })
}
