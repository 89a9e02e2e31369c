//! Minimisation of scale-invariant functions over directions.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::nelder_mead::{minimize_restarting, NelderMeadConfig};
use super::roots::golden_min;
use crate::rng;

/// Angular samples in the planar case.
const PLANAR_SAMPLES: usize = 2880;

/// Minimises `f` over unit vectors of `R^n`. Returns the minimum and a unit
/// minimiser. `f` only ever sees unit vectors.
///
/// In the plane this is a dense angular scan followed by golden-section
/// refinement of the best few local minima; in higher dimension, seeded
/// random directions followed by restarted simplex descent.
pub fn minimize_on_sphere<F>(n: usize, f: F) -> (f64, DVector<f64>)
where
    F: Fn(&DVector<f64>) -> f64,
{
    match n {
        0 => (f64::NAN, DVector::zeros(0)),
        1 => {
            let (a, b) = (DVector::from_element(1, 1.0), DVector::from_element(1, -1.0));
            let (fa, fb) = (f(&a), f(&b));
            if fa <= fb {
                (fa, a)
            } else {
                (fb, b)
            }
        }
        2 => planar(f),
        _ => general(n, f),
    }
}

fn planar<F>(f: F) -> (f64, DVector<f64>)
where
    F: Fn(&DVector<f64>) -> f64,
{
    let at = |t: f64| DVector::from_vec(vec![t.cos(), t.sin()]);
    let h = std::f64::consts::TAU / PLANAR_SAMPLES as f64;
    let vals: Vec<f64> = (0..PLANAR_SAMPLES).map(|k| f(&at(k as f64 * h))).collect();
    let mut minima: Vec<usize> = (0..PLANAR_SAMPLES)
        .filter(|&k| {
            let prev = vals[(k + PLANAR_SAMPLES - 1) % PLANAR_SAMPLES];
            let next = vals[(k + 1) % PLANAR_SAMPLES];
            vals[k] <= prev && vals[k] <= next
        })
        .collect();
    minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    minima.truncate(6);
    let mut best = (f64::INFINITY, 0.0);
    for k in minima {
        let t0 = k as f64 * h;
        let (t, v) = golden_min(|t| f(&at(t)), t0 - h, t0 + h, 1e-15);
        let v = v.min(vals[k]);
        let t = if v == vals[k] { t0 } else { t };
        if v < best.0 {
            best = (v, t);
        }
    }
    (best.0, at(best.1))
}

fn general<F>(n: usize, f: F) -> (f64, DVector<f64>)
where
    F: Fn(&DVector<f64>) -> f64,
{
    let mut rng = rng::stream(0x5eed_5a3e, n as u64);
    let samples = 4000 * n;
    let mut candidates: Vec<(f64, DVector<f64>)> = Vec::with_capacity(samples + 2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = DVector::zeros(n);
            e[i] = s;
            candidates.push((f(&e), e));
        }
    }
    for _ in 0..samples {
        let d = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = d.norm();
        if norm < 1e-12 {
            continue;
        }
        let u = d / norm;
        candidates.push((f(&u), u));
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.truncate(6);
    let cfg = NelderMeadConfig { step: 0.05, ftol: 1e-15, xtol: 1e-13, max_evals: 4000 * n, max_restarts: 6 };
    let mut best = candidates[0].clone();
    for (v0, u0) in candidates {
        let obj = |x: &[f64]| {
            let d = DVector::from_column_slice(x);
            let norm = d.norm();
            if norm < 1e-12 {
                f64::INFINITY
            } else {
                f(&(d / norm))
            }
        };
        let m = minimize_restarting(obj, u0.as_slice(), &cfg);
        if m.f < best.0 && m.f <= v0 {
            let d = DVector::from_vec(m.x);
            best = (m.f, d.normalize());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_ellipse_support_minimum() {
        // h of ellipse semiaxes (2,1): sqrt(4 u1^2 + u2^2), minimum 1 at (0, ±1)
        let (v, u) = minimize_on_sphere(2, |u| (4.0 * u[0] * u[0] + u[1] * u[1]).sqrt());
        assert!((v - 1.0).abs() < 1e-14);
        assert!(u[0].abs() < 1e-7);
    }

    #[test]
    fn three_dimensional_quadratic() {
        let (v, _) = minimize_on_sphere(3, |u| 3.0 * u[0] * u[0] + 2.0 * u[1] * u[1] + 1.5 * u[2] * u[2]);
        assert!((v - 1.5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn kinked_planar() {
        // l1 norm on unit circle: minimum 1 at the axes
        let (v, _) = minimize_on_sphere(2, |u| u[0].abs() + u[1].abs());
        assert!((v - 1.0).abs() < 1e-14);
    }
}
