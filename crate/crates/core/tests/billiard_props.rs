mod common;

use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use symlab::billiards::{flow, reflect, shortest_closed, xi_euclidean, FlowConfig, PhasePoint};
use symlab::bodies::{inradius_wrt, minkowski_sum, polar, random_symmetric_polytope};
use symlab::{rng, ConvexBody, Vector};

use common::random_smooth_pair;

fn gaussian(n: usize, s: &mut impl Rng) -> Vector {
    Vector::from_fn(n, |_, _| s.sample::<f64, _>(StandardNormal))
}

#[test]
fn reflection_in_a_ball_is_specular() {
    let ball = ConvexBody::ball(2, 1.0).unwrap();
    let mut s = rng::stream(17, 0);
    let mut tested = 0;
    while tested < 1000 {
        let p = gaussian(2, &mut s).normalize();
        let n = gaussian(2, &mut s) * s.random_range(0.1..3.0);
        if p.dot(&n) >= -1e-3 * n.norm() {
            continue;
        }
        let nh = n.normalize();
        let mirror = &p - &nh * (2.0 * p.dot(&nh));
        let got = reflect(&p, &n, &ball).unwrap();
        assert!((&got - &mirror).amax() <= 1e-10, "p {p} n {n}: {got} vs {mirror}");
        tested += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flow_stays_on_the_boundary(seed in any::<u64>()) {
        let (k, t) = random_smooth_pair(seed);
        let mut s = rng::stream(seed, 3);
        let u = gaussian(2, &mut s);
        let q = &u * (0.8 * s.random::<f64>() / k.g(&u));
        let w = gaussian(2, &mut s);
        let rec = flow(&k, &t, &PhasePoint::new(q, &w / t.g(&w)), &FlowConfig::with_bounces(30)).unwrap();
        for b in &rec.bounces {
            prop_assert!((k.g(&b.q) - 1.0).abs() <= 1e-9);
            prop_assert!((t.g(&b.p) - 1.0).abs() <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn shortest_matches_inradius_formula(seed in any::<u64>()) {
        let (k, t) = random_smooth_pair(seed);
        let traj = shortest_closed(&k, &t, 3, 8, seed).unwrap();
        let formula = 4.0 * inradius_wrt(&k, &polar(&t).unwrap()).unwrap().r;
        let scale = k.h(&Vector::from_vec(vec![1.0, 0.0])).max(k.h(&Vector::from_vec(vec![0.0, 1.0])));
        prop_assert!((traj.length - formula).abs() <= 1e-5 * scale, "{} vs {}", traj.length, formula);
        let back = traj.reversed(&t).unwrap();
        prop_assert!((back.length - traj.length).abs() <= 1e-12 * traj.length);
    }

    #[test]
    fn xi_is_monotone_under_inclusion(seed in any::<u64>()) {
        let k1 = random_symmetric_polytope(2, 4, seed).unwrap();
        let mut s = rng::stream(seed, 8);
        let mut pts = k1.vertices().unwrap().to_vec();
        let g = gaussian(2, &mut s) * 1.2;
        pts.push(-&g);
        pts.push(g);
        let k2 = ConvexBody::vertices_of(pts).unwrap();
        let x1 = xi_euclidean(&k1, 8, seed).unwrap().xi;
        let x2 = xi_euclidean(&k2, 8, seed).unwrap().xi;
        prop_assert!(x1 <= x2 + 1e-5, "{x1} > {x2}");
    }

    #[test]
    fn xi_is_superadditive(seed in any::<u64>()) {
        let k1 = random_symmetric_polytope(2, 4, seed).unwrap();
        let k2 = random_symmetric_polytope(2, 5, seed ^ 1).unwrap();
        let sum = minkowski_sum(&k1, &k2).unwrap();
        let x = |k: &ConvexBody| xi_euclidean(k, 8, seed).unwrap().xi;
        prop_assert!(x(&sum) >= x(&k1) + x(&k2) - 1e-5);
    }
}
