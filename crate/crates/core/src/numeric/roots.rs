use crate::error::{Error, Result};

/// Finds the first positive root of a function that is `<= 0` on `[0, s*]`
/// and `> 0` beyond `s*`, which is the shape of `g(x + s v) - 1` for a
/// convex gauge `g` when `x` starts inside or on the boundary.
///
/// Brackets by doubling from `initial` up to `max_reach`, then bisects until
/// the bracket width is below `rel_tol * hi`.
pub fn first_crossing<F>(f: F, initial: f64, max_reach: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut lo = 0.0;
    let mut hi = initial.max(1e-12);
    loop {
        let v = f(hi);
        if v.is_nan() {
            return Err(Error::Numerical("NaN while bracketing root".into()));
        }
        if v > 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > max_reach {
            return Err(Error::Numerical(format!("no root within reach {max_reach}")));
        }
    }
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // pick whichever end sits closer to zero
    let (flo, fhi) = (f(lo).abs(), f(hi).abs());
    Ok(if lo > 0.0 && flo < fhi { lo } else { hi })
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
pub fn golden_min<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
