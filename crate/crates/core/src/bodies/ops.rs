use std::sync::Arc;

use nalgebra::DMatrix;

use super::oracle::SupportOracle;
use super::polytope::{dedup, HPolytope, VPolytope};
use super::smooth::{Ellipsoid, PBall};
use super::{ConvexBody, Rep, Vector, MAX_EXACT_DIM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    H,
    V,
}

fn require_interior(k: &ConvexBody) -> Result<()> {
    if k.origin_interior() {
        Ok(())
    } else {
        Err(Error::OriginNotInterior)
    }
}

fn same_dim(a: &ConvexBody, b: &ConvexBody) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

fn keep_symmetry(body: ConvexBody, symmetric: bool) -> ConvexBody {
    ConvexBody { symmetric: body.symmetric || symmetric, ..body }
}

/// Polar body `K° = {y : <x, y> <= 1 for all x in K}`.
pub fn polar(k: &ConvexBody) -> Result<ConvexBody> {
    require_interior(k)?;
    let sym = k.symmetric;
    let out = match &*k.rep {
        Rep::V(v) => {
            // one halfspace per vertex; the polar's vertices are the facets
            let hull = v.hull();
            let vertices = dedup(hull.facets.iter().map(|f| &f.normal / f.offset).collect());
            let normals = v.vertices().to_vec();
            let offsets = vec![1.0; normals.len()];
            ConvexBody::from_hpoly(HPolytope::from_parts(normals, offsets, vertices))
        }
        Rep::H(h) => {
            let pts = h.normals().iter().zip(h.offsets()).map(|(a, b)| a / *b).collect();
            ConvexBody::from_vpoly(VPolytope::new(pts)?)
        }
        Rep::Ellipsoid(e) => ConvexBody::from_ellipsoid(Ellipsoid::new(e.inverse_shape().clone())?),
        Rep::PBall(b) => ConvexBody::from_pball(PBall::new(b.conjugate_exponent(), 1.0 / b.radius, b.dim)?),
        Rep::Oracle(o) => {
            // h_{K°} = g_K and g_{K°} = h_K
            let inner = o.clone();
            let support = o.support_fn();
            let polar = SupportOracle::new(
                o.dim,
                format!("polar of {}", o.label),
                Arc::new(move |u: &Vector| inner.gauge(u)),
            )
            .with_gauge(Arc::new(move |x: &Vector| support(x)));
            ConvexBody { rep: Arc::new(Rep::Oracle(polar)), symmetric: false }
        }
    };
    Ok(keep_symmetry(out, sym))
}

/// Minkowski sum. Two polytopes give the hull of pairwise vertex sums; any
/// other pair gives a support oracle `h_{K1} + h_{K2}`.
pub fn minkowski_sum(a: &ConvexBody, b: &ConvexBody) -> Result<ConvexBody> {
    same_dim(a, b)?;
    let sym = a.symmetric && b.symmetric;
    if let (Some(va), Some(vb)) = (a.vertices(), b.vertices()) {
        let mut pts = Vec::with_capacity(va.len() * vb.len());
        for x in va {
            for y in vb {
                pts.push(x + y);
            }
        }
        return Ok(keep_symmetry(ConvexBody::vertices_of(pts)?, sym));
    }
    let (ka, kb) = (a.clone(), b.clone());
    let oracle = SupportOracle::new(
        a.dim(),
        format!("{} + {}", a.kind(), b.kind()),
        Arc::new(move |u: &Vector| ka.h(u) + kb.h(u)),
    );
    Ok(ConvexBody { rep: Arc::new(Rep::Oracle(oracle)), symmetric: sym })
}

/// `M K` for invertible `M`.
pub fn linear_image(k: &ConvexBody, m: &DMatrix<f64>) -> Result<ConvexBody> {
    let n = k.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
    }
    let scale = m.amax();
    let det = m.determinant();
    if scale == 0.0 || det.abs() <= 1e-12 * scale.powi(n as i32) {
        return Err(Error::InvalidInput(format!("singular linear map (det = {det:.3e})")));
    }
    let inv = m.clone().try_inverse().ok_or_else(|| Error::InvalidInput("singular linear map".into()))?;
    let inv_t = inv.transpose();
    let sym = k.symmetric;
    let out = match &*k.rep {
        Rep::V(v) => ConvexBody::vertices_of(v.vertices().iter().map(|x| m * x).collect())?,
        Rep::H(h) => {
            let normals = h.normals().iter().map(|a| &inv_t * a).collect();
            let vertices = h.vertices().iter().map(|x| m * x).collect();
            ConvexBody::from_hpoly(HPolytope::from_parts(normals, h.offsets().to_vec(), vertices))
        }
        Rep::Ellipsoid(e) => {
            let q = &inv_t * e.shape() * &inv;
            ConvexBody::from_ellipsoid(Ellipsoid::new((&q + q.transpose()) * 0.5)?)
        }
        Rep::PBall(_) | Rep::Oracle(_) => {
            let m_t = m.transpose();
            let (ks, kg, kd) = (k.clone(), k.clone(), k.clone());
            let (inv_g, inv_d) = (inv.clone(), inv.clone());
            let mut o = SupportOracle::new(
                n,
                format!("linear image of {}", k.kind()),
                Arc::new(move |u: &Vector| ks.h(&(&m_t * u))),
            )
            .with_gauge(Arc::new(move |x: &Vector| kg.g(&(&inv_g * x))));
            if k.is_smooth() {
                let inv_t = inv_t.clone();
                o = o.with_gauge_gradient(Arc::new(move |x: &Vector| {
                    let y = &inv_d * x;
                    &inv_t * kd.gauge_gradient(&y).expect("smooth body")
                }));
            }
            ConvexBody { rep: Arc::new(Rep::Oracle(o)), symmetric: false }
        }
    };
    Ok(keep_symmetry(out, sym))
}

/// `lambda K` for `lambda > 0`.
pub fn scaled(k: &ConvexBody, lambda: f64) -> Result<ConvexBody> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("scale factor must be positive, got {lambda}")));
    }
    let sym = k.symmetric;
    let out = match &*k.rep {
        Rep::PBall(b) => ConvexBody::from_pball(PBall::new(b.p, b.radius * lambda, b.dim)?),
        _ => linear_image(k, &(DMatrix::identity(k.dim(), k.dim()) * lambda))?,
    };
    Ok(keep_symmetry(out, sym))
}

fn polytope_halfspaces(k: &ConvexBody) -> Result<(Vec<Vector>, Vec<f64>, Vec<Vector>)> {
    if !k.is_polytope() {
        return Err(Error::Unsupported(format!("expected a polytope, got {}", k.kind())));
    }
    require_interior(k)?;
    let (a, b) = k.halfspaces().expect("polytope");
    Ok((a, b, k.vertices().expect("polytope").to_vec()))
}

fn lift(x: &Vector, before: usize, after: usize) -> Vector {
    let mut out = Vector::zeros(before + x.len() + after);
    out.rows_mut(before, x.len()).copy_from(x);
    out
}

/// Cartesian product `P1 x P2`. Polytopes give the union of the lifted
/// halfspaces; other factors give an oracle with `h = h1 + h2` and
/// `g = max(g1, g2)`.
pub fn direct_product(p1: &ConvexBody, p2: &ConvexBody) -> Result<ConvexBody> {
    if !p1.is_polytope() || !p2.is_polytope() {
        return product_oracle(p1, p2);
    }
    let (a1, b1, v1) = polytope_halfspaces(p1)?;
    let (a2, b2, v2) = polytope_halfspaces(p2)?;
    let (n1, n2) = (p1.dim(), p2.dim());
    if n1 + n2 > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge(n1 + n2));
    }
    let mut normals: Vec<Vector> = a1.iter().map(|a| lift(a, 0, n2)).collect();
    normals.extend(a2.iter().map(|a| lift(a, n1, 0)));
    let mut offsets = b1;
    offsets.extend(b2);
    let mut vertices = Vec::with_capacity(v1.len() * v2.len());
    for x in &v1 {
        for y in &v2 {
            let mut z = Vector::zeros(n1 + n2);
            z.rows_mut(0, n1).copy_from(x);
            z.rows_mut(n1, n2).copy_from(y);
            vertices.push(z);
        }
    }
    let sym = p1.symmetric && p2.symmetric;
    Ok(keep_symmetry(ConvexBody::from_hpoly(HPolytope::from_parts(normals, offsets, vertices)), sym))
}

fn product_oracle(p1: &ConvexBody, p2: &ConvexBody) -> Result<ConvexBody> {
    require_interior(p1)?;
    require_interior(p2)?;
    let (n1, n2) = (p1.dim(), p2.dim());
    let split = move |x: &Vector| (x.rows(0, n1).into_owned(), x.rows(n1, n2).into_owned());
    let (h1, h2, g1, g2) = (p1.clone(), p2.clone(), p1.clone(), p2.clone());
    let oracle = SupportOracle::new(
        n1 + n2,
        format!("{} x {}", p1.kind(), p2.kind()),
        Arc::new(move |u: &Vector| {
            let (a, b) = split(u);
            h1.h(&a) + h2.h(&b)
        }),
    )
    .with_gauge(Arc::new(move |x: &Vector| {
        let (a, b) = split(x);
        g1.g(&a).max(g2.g(&b))
    }));
    Ok(ConvexBody { rep: Arc::new(Rep::Oracle(oracle)), symmetric: p1.symmetric && p2.symmetric })
}

/// Free sum `conv(P1 x {0} ∪ {0} x P2)`.
pub fn free_sum(p1: &ConvexBody, p2: &ConvexBody) -> Result<ConvexBody> {
    let (_, _, v1) = polytope_halfspaces(p1)?;
    let (_, _, v2) = polytope_halfspaces(p2)?;
    let (n1, n2) = (p1.dim(), p2.dim());
    if n1 + n2 > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge(n1 + n2));
    }
    let mut pts: Vec<Vector> = v1.iter().map(|x| lift(x, 0, n2)).collect();
    pts.extend(v2.iter().map(|y| lift(y, n1, 0)));
    let sym = p1.symmetric && p2.symmetric;
    Ok(keep_symmetry(ConvexBody::vertices_of(pts)?, sym))
}

/// Switches a polytope between halfspace and vertex representation.
pub fn convert(k: &ConvexBody, target: RepKind) -> Result<ConvexBody> {
    if k.dim() > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLarge(k.dim()));
    }
    let sym = k.symmetric;
    let out = match (&*k.rep, target) {
        (Rep::H(_), RepKind::H) | (Rep::V(_), RepKind::V) => k.clone(),
        (Rep::H(h), RepKind::V) => ConvexBody::from_vpoly(VPolytope::new(h.vertices().to_vec())?),
        (Rep::V(v), RepKind::H) => {
            require_interior(k)?;
            let hull = v.hull();
            let normals = hull.facets.iter().map(|f| f.normal.clone()).collect();
            let offsets = hull.facets.iter().map(|f| f.offset).collect();
            ConvexBody::from_hpoly(HPolytope::from_parts(normals, offsets, v.vertices().to_vec()))
        }
        _ => return Err(Error::Unsupported(format!("cannot convert {} to a polytope representation", k.kind()))),
    };
    Ok(keep_symmetry(out, sym))
}
