//! Capacity values and sandwiches for convex bodies in `R^{2n}` and for
//! Lagrangian products `K × T`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::bodies::{inradius_wrt, is_quarter_symmetric, polar, ConvexBody, Rep, Vector};
use crate::error::{Error, Result};
use crate::numeric::{minimize_restarting, NelderMeadConfig};
use crate::volume::{factorial, volume, VolumeConfig};

/// Support directions used for the enclosing disc of a projection that has
/// neither vertices nor a closed form.
pub const DISC_DIRECTIONS: usize = 720;

/// `K × T ⊂ R^n_q × R^n_p`.
#[derive(Debug, Clone)]
pub struct LagrangianProduct {
    pub k: ConvexBody,
    pub t: ConvexBody,
    pub n: usize,
}

impl LagrangianProduct {
    pub fn new(k: ConvexBody, t: ConvexBody) -> Result<Self> {
        if k.dim() != t.dim() {
            return Err(Error::DimensionMismatch { expected: k.dim(), got: t.dim() });
        }
        if !k.origin_interior() || !t.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        let n = k.dim();
        Ok(Self { k, t, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityMethod {
    EhzFormula,
    Sandwich,
    LemmaIK,
}

impl fmt::Display for CapacityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EhzFormula => "ehz-formula",
            Self::Sandwich => "sandwich",
            Self::LemmaIK => "lemma-iK",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Point where the extremal inscribed body touches the boundary.
    Contact { point: Vec<f64>, facet: Option<usize> },
    /// Smallest enclosing disc of the projection onto the `(q_j, p_j)` plane.
    Plane { index: usize, center: [f64; 2], radius: f64 },
    Trajectory { points: Vec<Vec<f64>>, length: f64 },
}

impl Witness {
    fn summary(&self) -> String {
        let coords = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
        match self {
            Self::Contact { point, facet } => match facet {
                Some(i) => format!("contact=({}) facet={i}", coords(point)),
                None => format!("contact=({})", coords(point)),
            },
            Self::Plane { index, radius, .. } => format!("plane={index} radius={radius:.6}"),
            Self::Trajectory { points, length } => format!("bounces={} length={length:.6}", points.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub method: CapacityMethod,
    /// Half the phase-space dimension.
    pub n: usize,
    pub value: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    pub witnesses: Vec<Witness>,
}

impl CapacityEstimate {
    pub const CSV_HEADER: &'static str = "method,n,lower,value,upper,gap_ratio,witness";

    pub fn gap_ratio(&self) -> f64 {
        self.upper / self.lower
    }

    pub fn csv_row(&self) -> String {
        let value = self.value.map(|v| format!("{v:.17e}")).unwrap_or_default();
        let witness = self.witnesses.iter().map(Witness::summary).collect::<Vec<_>>().join("; ");
        format!(
            "{},{},{:.17e},{},{:.17e},{:.17e},{}",
            self.method,
            self.n,
            self.lower,
            value,
            self.upper,
            self.gap_ratio(),
            witness
        )
    }
}

/// `c_EHZ(K × T) = 4 inrad_{T°}(K)` for centrally symmetric `K` and `T`.
pub fn ehz_lagrangian_product(p: &LagrangianProduct) -> Result<CapacityEstimate> {
    if !p.k.is_symmetric() || !p.t.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let t_polar = polar(&p.t)?;
    let inr = inradius_wrt(&p.k, &t_polar)?;
    let value = 4.0 * inr.r;
    Ok(CapacityEstimate {
        method: CapacityMethod::EhzFormula,
        n: p.n,
        value: Some(value),
        lower: value,
        upper: value,
        witnesses: vec![Witness::Contact { point: inr.contact.iter().copied().collect(), facet: inr.facet }],
    })
}

/// `c_EHZ(K × T) / (n! Vol(K) Vol(T))^{1/n}`; at most 1 if Viterbo's
/// conjecture holds for the product.
pub fn viterbo_ratio(p: &LagrangianProduct) -> Result<f64> {
    let c = ehz_lagrangian_product(p)?.value.expect("formula yields a value");
    let exact = VolumeConfig::exact();
    let vol = volume(&p.k, &exact)?.value * volume(&p.t, &exact)?.value;
    Ok(c / (factorial(p.n) * vol).powf(1.0 / p.n as f64))
}

fn half_dim(k: &ConvexBody) -> Result<usize> {
    let d = k.dim();
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::InvalidInput(format!("phase space must have even dimension, got {d}")));
    }
    Ok(d / 2)
}

/// `[pi r^2, 4 r^2]` with `r` the Euclidean inradius, for bodies with `K = iK`.
pub fn complex_symmetric_bounds(k: &ConvexBody) -> Result<CapacityEstimate> {
    let n = half_dim(k)?;
    if !is_quarter_symmetric(k)? {
        return Err(Error::NotQuarterSymmetric);
    }
    let inr = inradius_wrt(k, &ConvexBody::ball(2 * n, 1.0)?)?;
    let r2 = inr.r * inr.r;
    Ok(CapacityEstimate {
        method: CapacityMethod::LemmaIK,
        n,
        value: None,
        lower: PI * r2,
        upper: 4.0 * r2,
        witnesses: vec![Witness::Contact { point: inr.contact.iter().copied().collect(), facet: inr.facet }],
    })
}

/// Linear sandwich: the inscribed Euclidean ball below, the best enclosing
/// cylinder over a coordinate symplectic plane above.
pub fn capacity_sandwich(k: &ConvexBody) -> Result<CapacityEstimate> {
    let n = half_dim(k)?;
    let inr = inradius_wrt(k, &ConvexBody::ball(2 * n, 1.0)?)?;
    if !(inr.r > 0.0) {
        return Err(Error::Degenerate("zero inradius".into()));
    }
    let mut best: Option<(usize, [f64; 2], f64)> = None;
    for j in 0..n {
        let (center, radius) = projection_disc(k, j, j + n)?;
        if best.is_none_or(|b| radius < b.2) {
            best = Some((j, center, radius));
        }
    }
    let (index, center, radius) = best.expect("n >= 1");
    let lower = PI * inr.r * inr.r;
    let upper = PI * radius * radius;
    Ok(CapacityEstimate {
        method: CapacityMethod::Sandwich,
        n,
        value: None,
        lower,
        upper: upper.max(lower),
        witnesses: vec![
            Witness::Contact { point: inr.contact.iter().copied().collect(), facet: inr.facet },
            Witness::Plane { index, center, radius },
        ],
    })
}

/// Smallest disc enclosing the projection of `K` onto coordinates `(a, b)`.
pub fn projection_disc(k: &ConvexBody, a: usize, b: usize) -> Result<([f64; 2], f64)> {
    if let Some(vs) = k.vertices() {
        let pts: Vec<[f64; 2]> = vs.iter().map(|v| [v[a], v[b]]).collect();
        return Ok(minidisc(&pts));
    }
    if let Rep::Ellipsoid(e) = k.rep() {
        let inv = e.inverse_shape();
        let m = Matrix2::new(inv[(a, a)], inv[(a, b)], inv[(b, a)], inv[(b, b)]);
        let lmax = m.symmetric_eigenvalues().max();
        return Ok(([0.0, 0.0], lmax.sqrt()));
    }
    let dim = k.dim();
    let dirs: Vec<(f64, f64, f64)> = (0..DISC_DIRECTIONS)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / DISC_DIRECTIONS as f64;
            let mut u = Vector::zeros(dim);
            u[a] = th.cos();
            u[b] = th.sin();
            (th.cos(), th.sin(), k.h(&u))
        })
        .collect();
    let radius_at = |c: &[f64]| dirs.iter().map(|(x, y, h)| h - c[0] * x - c[1] * y).fold(f64::NEG_INFINITY, f64::max);
    let start = if k.is_symmetric() { [0.0, 0.0] } else { centroid_guess(&dirs) };
    let m = minimize_restarting(radius_at, &start, &NelderMeadConfig::default());
    // circumscribed 720-gon: scale out to a disc that is guaranteed to contain it
    let r = m.f / (PI / DISC_DIRECTIONS as f64).cos();
    Ok(([m.x[0], m.x[1]], r))
}

fn centroid_guess(dirs: &[(f64, f64, f64)]) -> [f64; 2] {
    // midpoint of the bounding box from the four axis-aligned directions
    let q = dirs.len() / 4;
    let (hx, hy, hmx, hmy) = (dirs[0].2, dirs[q].2, dirs[2 * q].2, dirs[3 * q].2);
    [(hx - hmx) / 2.0, (hy - hmy) / 2.0]
}

/// Smallest enclosing disc of a planar point set (incremental Welzl).
pub fn minidisc(points: &[[f64; 2]]) -> ([f64; 2], f64) {
    let mut c = points[0];
    let mut r2 = 0.0;
    let d2 = |p: &[f64; 2], c: &[f64; 2]| (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
    let eps = |r2: f64| 1e-12 * (1.0 + r2);
    for i in 1..points.len() {
        if d2(&points[i], &c) <= r2 + eps(r2) {
            continue;
        }
        c = points[i];
        r2 = 0.0;
        for j in 0..i {
            if d2(&points[j], &c) <= r2 + eps(r2) {
                continue;
            }
            c = [(points[i][0] + points[j][0]) / 2.0, (points[i][1] + points[j][1]) / 2.0];
            r2 = d2(&points[i], &c);
            for k in 0..j {
                if d2(&points[k], &c) <= r2 + eps(r2) {
                    continue;
                }
                c = circumcenter(&points[i], &points[j], &points[k]).unwrap_or(c);
                r2 = d2(&points[i], &c).max(d2(&points[j], &c)).max(d2(&points[k], &c));
            }
        }
    }
    (c, r2.sqrt())
}

fn circumcenter(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> Option<[f64; 2]> {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    Some([a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d])
}

/// Diagonal map `(q, p) -> (lambda q, mu p)` on `R^{2n}`.
pub fn conformal_scaling(n: usize, lambda: f64, mu: f64) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |i, j| if i != j { 0.0 } else if i < n { lambda } else { mu })
}
