use rand::Rng;
use rand_distr::StandardNormal;

use super::{ConvexBody, Vector, VPolytope};
use crate::error::{Error, Result};
use crate::rng;

const MAX_ATTEMPTS: u64 = 100;

/// `conv{±g_1, …, ±g_m}` for standard Gaussian `g_i`, rescaled to Euclidean
/// inradius 1. Deterministic in `(n, m, seed)`.
pub fn random_symmetric_polytope(n: usize, m: usize, seed: u64) -> Result<ConvexBody> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {n}")));
    }
    if m < n + 1 {
        return Err(Error::InvalidInput(format!("need m >= n + 1 generators, got m = {m}, n = {n}")));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut stream = rng::stream(seed, attempt);
        let mut pts = Vec::with_capacity(2 * m);
        for _ in 0..m {
            let g = Vector::from_fn(n, |_, _| stream.sample::<f64, _>(StandardNormal));
            pts.push(-&g);
            pts.push(g);
        }
        let Ok(poly) = VPolytope::new(pts) else { continue };
        let inrad = poly.hull().facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
        if !(inrad > 0.0) {
            continue;
        }
        let scaled: Vec<Vector> = poly.vertices().iter().map(|v| v / inrad).collect();
        let body = ConvexBody::from_vpoly(VPolytope::new(scaled)?);
        if body.is_symmetric() {
            return Ok(body);
        }
    }
    Err(Error::Degenerate(format!("no full-dimensional sample after {MAX_ATTEMPTS} attempts")))
}
