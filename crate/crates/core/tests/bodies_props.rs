use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use symlab::bodies::{
    direct_product, free_sum, inradius_wrt, minkowski_sum, polar, random_symmetric_polytope, Ellipsoid, PBall,
};
use symlab::{rng, ConvexBody, Vector};

fn gaussian(n: usize, seed: u64, idx: u64) -> Vector {
    let mut s = rng::stream(seed, idx);
    Vector::from_fn(n, |_, _| s.sample::<f64, _>(StandardNormal))
}

/// Random polytope with the origin inside but no symmetry.
fn lopsided(n: usize, m: usize, seed: u64) -> ConvexBody {
    let mut pts: Vec<Vector> = (0..m).map(|i| gaussian(n, seed, i as u64)).collect();
    for i in 0..n {
        let mut e = Vector::zeros(n);
        e[i] = 0.5;
        pts.push(e.clone());
        pts.push(-e * 0.3);
    }
    ConvexBody::vertices_of(pts).unwrap()
}

fn same_vertex_set(a: &[Vector], b: &[Vector], tol: f64) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| (x - y).amax() <= tol))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gauge_is_support_of_polar(n in 2usize..=4, extra in 1usize..5, seed in any::<u64>()) {
        let bodies = [
            random_symmetric_polytope(n, n + extra, seed).unwrap(),
            lopsided(n, n + extra, seed),
            ConvexBody::from_ellipsoid(Ellipsoid::with_semiaxes(&(0..n).map(|i| 0.5 + i as f64).collect::<Vec<_>>()).unwrap()),
            ConvexBody::from_pball(PBall::new(1.5 + extra as f64, 1.3, n).unwrap()),
        ];
        for k in &bodies {
            let kp = polar(k).unwrap();
            for j in 0..8 {
                let x = gaussian(n, seed, 100 + j);
                prop_assert!(rel_close(k.g(&x), kp.h(&x), 1e-9), "{}: {} vs {}", k, k.g(&x), kp.h(&x));
            }
        }
    }

    #[test]
    fn bipolar_returns_the_polytope(n in 2usize..=4, extra in 1usize..5, seed in any::<u64>()) {
        let p = random_symmetric_polytope(n, n + extra, seed).unwrap();
        let pp = polar(&polar(&p).unwrap()).unwrap();
        prop_assert!(same_vertex_set(p.vertices().unwrap(), pp.vertices().unwrap(), 1e-9));
    }

    #[test]
    fn support_is_sublinear(n in 2usize..=4, seed in any::<u64>(), lambda in 0.0f64..10.0) {
        let k = lopsided(n, n + 3, seed);
        let u = gaussian(n, seed, 200);
        let v = gaussian(n, seed, 201);
        prop_assert!(rel_close(k.h(&(&u * lambda)), lambda * k.h(&u), 1e-12));
        prop_assert!(k.h(&(&u + &v)) <= k.h(&u) + k.h(&v) + 1e-12);
    }

    #[test]
    fn inradius_matches_bisection(n in 2usize..=3, seed in any::<u64>()) {
        let k = lopsided(n, n + 4, seed);
        let t = random_symmetric_polytope(n, n + 2, seed ^ 1).unwrap();
        let r = inradius_wrt(&k, &t).unwrap().r;
        let fits = |r: f64| t.vertices().unwrap().iter().map(|v| k.g(&(v * r))).fold(0.0, f64::max) <= 1.0;
        let (mut lo, mut hi) = (0.0, 1.0);
        while fits(hi) {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if fits(mid) { lo = mid } else { hi = mid }
        }
        prop_assert!((r - lo).abs() <= 1e-8 * r.max(1.0), "{r} vs {lo}");
    }

    #[test]
    fn sum_support_adds(n in 2usize..=3, seed in any::<u64>()) {
        let a = lopsided(n, n + 2, seed);
        let b = random_symmetric_polytope(n, n + 3, seed ^ 7).unwrap();
        let e = ConvexBody::from_ellipsoid(Ellipsoid::with_semiaxes(&vec![0.7; n]).unwrap());
        for other in [&b, &e] {
            let s = minkowski_sum(&a, other).unwrap();
            for j in 0..6 {
                let u = gaussian(n, seed, 300 + j);
                prop_assert!(rel_close(s.h(&u), a.h(&u) + other.h(&u), 1e-9));
            }
        }
    }

    #[test]
    fn polar_of_free_sum_is_product_of_polars(n1 in 1usize..=2, n2 in 1usize..=2, seed in any::<u64>()) {
        let p1 = if n1 == 1 { ConvexBody::cube(1, 1.3).unwrap() } else { random_symmetric_polytope(n1, 4, seed).unwrap() };
        let p2 = if n2 == 1 { ConvexBody::cube(1, 0.6).unwrap() } else { random_symmetric_polytope(n2, 5, seed ^ 3).unwrap() };
        let lhs = polar(&free_sum(&p1, &p2).unwrap()).unwrap();
        let rhs = direct_product(&polar(&p1).unwrap(), &polar(&p2).unwrap()).unwrap();
        prop_assert!(same_vertex_set(lhs.vertices().unwrap(), rhs.vertices().unwrap(), 1e-9));
        for j in 0..6 {
            let u = gaussian(n1 + n2, seed, 400 + j);
            prop_assert!(rel_close(lhs.h(&u), rhs.h(&u), 1e-9));
        }
    }
}
