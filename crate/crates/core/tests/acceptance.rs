//! Acceptance run: one PASS/FAIL line per criterion, with its tolerance and
//! runtime budget. Exits non-zero if any asserted criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::StandardNormal;

use symlab::billiards::{flow, reflect, shortest_closed, FlowConfig, FlowHalt, PhasePoint};
use symlab::bodies::{inradius_wrt, polar, HannerTree};
use symlab::capacities::{complex_symmetric_bounds, ehz_lagrangian_product, LagrangianProduct};
use symlab::harness::{run_experiment, Cell, ExperimentConfig, ExperimentReport, Suite};
use symlab::volume::{mahler_bound, mahler_volume_with, VolumeConfig};
use symlab::{rng, ConvexBody, Result, Vector};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn floats(r: &ExperimentReport, name: &str) -> Vec<f64> {
    let j = r.column(name).unwrap_or_else(|| panic!("no column {name}"));
    r.rows
        .iter()
        .filter_map(|row| match row[j] {
            Cell::Float(x) => Some(x),
            _ => None,
        })
        .collect()
}

fn worst(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn ehz_equality() -> Result<Outcome> {
    let mut err: f64 = 0.0;
    for n in 2..=4 {
        let p = LagrangianProduct::new(ConvexBody::cube(n, 1.0)?, ConvexBody::cross_polytope(n)?)?;
        let c = ehz_lagrangian_product(&p)?.value.expect("formula value");
        err = err.max((c - 4.0).abs() / 4.0);
    }
    outcome(err <= 1e-9, format!("n = 2..4, max rel. error {err:.1e} (tol 1e-9)"))
}

fn mahler_minimizers() -> Result<Outcome> {
    let mut err: f64 = 0.0;
    let mut bodies = 0;
    for n in 2..=4 {
        let mut family = vec![ConvexBody::cube(n, 1.0)?];
        for tree in HannerTree::enumerate(n) {
            family.push(tree.build()?);
        }
        for k in &family {
            let nu = mahler_volume_with(k, &VolumeConfig::exact())?.nu;
            err = err.max((nu - mahler_bound(n)).abs() / mahler_bound(n));
            bodies += 1;
        }
    }
    outcome(err <= 1e-9, format!("{bodies} bodies, max rel. error {err:.1e} (tol 1e-9)"))
}

fn planar_mahler() -> Result<Outcome> {
    let mut c = ExperimentConfig::new(Suite::MahlerSweep, 20_240_301);
    c.count = 500;
    let r = run_experiment(&c)?;
    let slack = floats(&r, "mahler_slack");
    let min = -worst(slack.iter().map(|s| -s));
    let ok = slack.len() == 500 && min >= -1e-9 && r.violations.is_empty();
    outcome(ok, format!("{} rows, min slack {min:.3e} (tol -1e-9)", slack.len()))
}

fn kuperberg_santalo() -> Result<Outcome> {
    let mut c = ExperimentConfig::new(Suite::MahlerSweep, 7_001);
    c.dims = vec![2, 3];
    c.count = 200;
    let r = run_experiment(&c)?;
    let kup = floats(&r, "kuperberg_slack");
    let san = floats(&r, "santalo_slack");
    let (kmin, smin) = (-worst(kup.iter().map(|s| -s)), -worst(san.iter().map(|s| -s)));
    let ok = kup.len() == 400 && kmin >= 0.0 && smin >= 0.0;
    outcome(ok, format!("{} rows over n = 2, 3, min floor slack {kmin:.3e}, min ceiling slack {smin:.3e}", kup.len()))
}

fn billiard_capacity() -> Result<Outcome> {
    let mut err: f64 = 0.0;
    for i in 0..50u64 {
        let (k, t) = common::random_smooth_pair(9_000 + i);
        let traj = shortest_closed(&k, &t, 3, 8, i)?;
        let formula = 4.0 * inradius_wrt(&k, &polar(&t)?)?.r;
        err = err.max((traj.length - formula).abs());
    }
    outcome(err <= 1e-5, format!("50 pairs, max |length - 4 inrad| {err:.2e} (tol 1e-5)"))
}

fn flow_correctness() -> Result<Outcome> {
    let disc = ConvexBody::ball(2, 1.0)?;
    let start = PhasePoint::new(Vector::zeros(2), Vector::from_vec(vec![1.0, 0.0]));
    let rec = flow(&disc, &disc, &start, &FlowConfig::with_bounces(16))?;
    let closed = rec.halt == FlowHalt::Closed { period: 2 } && rec.closure_residual <= 1e-6;
    let length_err = (rec.orbit.length - 4.0).abs();

    let mut s = rng::stream(606, 0);
    let mut dev: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 1000 {
        let p = Vector::from_fn(2, |_, _| s.sample::<f64, _>(StandardNormal)).normalize();
        let n = Vector::from_fn(2, |_, _| s.sample::<f64, _>(StandardNormal));
        if p.dot(&n) >= -1e-3 * n.norm() {
            continue;
        }
        let nh = n.normalize();
        let mirror = &p - &nh * (2.0 * p.dot(&nh));
        dev = dev.max((reflect(&p, &n, &disc)? - mirror).amax());
        pairs += 1;
    }
    outcome(
        closed && length_err <= 1e-9 && dev <= 1e-10,
        format!(
            "period-2 orbit, length error {length_err:.1e}, closure residual {:.1e} (tol 1e-6), specular deviation {dev:.1e} over 1000 pairs (tol 1e-10)",
            rec.closure_residual
        ),
    )
}

fn xi_bounds() -> Result<Outcome> {
    let mut c = ExperimentConfig::new(Suite::XiBounds, 31_337);
    c.count = 100;
    c.pairs = Some(50);
    c.starts = 8;
    let r = run_experiment(&c)?;
    let kind = r.column("kind").unwrap();
    let (xi, inrad, slack) = (r.column("xi").unwrap(), r.column("inrad").unwrap(), r.column("superadditive_slack").unwrap());
    let f = |c: &Cell| if let Cell::Float(x) = c { *x } else { f64::NAN };
    let mut bound_gap = f64::NEG_INFINITY;
    let mut min_slack = f64::INFINITY;
    let (mut bodies, mut pairs) = (0, 0);
    for row in &r.rows {
        let (x, ir) = (f(&row[xi]), f(&row[inrad]));
        if row[kind] == Cell::Text("body".into()) {
            bodies += 1;
            bound_gap = bound_gap.max((4.0 * ir - x).max(x - 6.0 * ir));
        } else {
            pairs += 1;
            min_slack = min_slack.min(f(&row[slack]));
        }
    }
    let ok = bodies == 100 && pairs == 50 && bound_gap <= 1e-6 && min_slack >= -1e-5;
    outcome(
        ok,
        format!("{bodies} bodies, worst bound excess {bound_gap:.1e} (tol 1e-6); {pairs} pairs, min superadditivity slack {min_slack:.3e} (tol -1e-5)"),
    )
}

fn viterbo_cross_path() -> Result<Outcome> {
    let mut c = ExperimentConfig::new(Suite::ViterboSweep, 4_242);
    c.dims = vec![2, 3, 4];
    c.count = 100;
    let r = run_experiment(&c)?;
    let agree = r.column("agree").unwrap();
    let body = r.column("body").unwrap();
    let ratio = r.column("ratio").unwrap();
    let all_agree = r.rows.iter().all(|row| row[agree] == Cell::Bool(true));
    let cube_err = worst(r.rows.iter().filter(|row| row[body] == Cell::Text("cube".into())).map(|row| match row[ratio] {
        Cell::Float(x) => (x - 1.0).abs(),
        _ => f64::INFINITY,
    }));
    outcome(
        all_agree && cube_err <= 1e-9 && r.rows.len() == 303,
        format!("{} rows over n = 2..4, all agree: {all_agree}, cube |ratio - 1| {cube_err:.1e} (tol 1e-9)", r.rows.len()),
    )
}

fn lemma_sandwich() -> Result<Outcome> {
    let ball = ConvexBody::ball(4, 1.0)?;
    let cube = ConvexBody::cube(4, 1.0)?;
    let mut dev: f64 = 0.0;
    for k in [&ball, &cube] {
        let l = complex_symmetric_bounds(k)?;
        dev = dev.max((l.upper / l.lower - 4.0 / PI).abs() / (4.0 / PI));
    }
    let l = complex_symmetric_bounds(&ball)?;
    let contains = l.lower <= PI && PI <= l.upper;
    outcome(
        dev <= 1e-15 && contains,
        format!("ball and cube in R^4, max rel. deviation of upper/lower from 4/pi {dev:.1e}; ball interval [{:.6}, {:.6}] contains pi", l.lower, l.upper),
    )
}

fn report_only() -> Result<Outcome> {
    let mut c = ExperimentConfig::new(Suite::CapacityGap, 5);
    c.dims = vec![1, 2];
    c.count = 10;
    let gap = run_experiment(&c)?;
    let a = floats(&gap, "a_ratio");
    let mut c = ExperimentConfig::new(Suite::XiBounds, 5);
    c.count = 10;
    c.pairs = Some(0);
    c.starts = 8;
    let xi = run_experiment(&c)?;
    let cs = floats(&xi, "volume_ratio");
    let mut c = ExperimentConfig::new(Suite::MahlerSweep, 5);
    c.dims = vec![3];
    c.count = 20;
    let m3 = run_experiment(&c)?;
    let min3 = -worst(floats(&m3, "mahler_slack").into_iter().map(|s| -s));
    let max = |v: &[f64]| worst(v.iter().copied());
    outcome(
        true,
        format!(
            "REPORT-ONLY: max A estimate {:.4} over {} bodies, max C estimate {:.4} over {} bodies, min n = 3 Mahler slack {min3:.4} over {} bodies",
            max(&a),
            a.len(),
            max(&cs),
            cs.len(),
            m3.rows.len()
        ),
    )
}

fn main() {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, Check, Option<u64>); 10] = [
        ("EHZ equality case", ehz_equality, Some(1)),
        ("Mahler minimizers", mahler_minimizers, Some(5)),
        ("2D Mahler assertion", planar_mahler, Some(30)),
        ("Kuperberg floor and Santalo ceiling", kuperberg_santalo, Some(120)),
        ("Billiard-capacity equivalence", billiard_capacity, Some(120)),
        ("Flow correctness", flow_correctness, Some(5)),
        ("xi bounds", xi_bounds, Some(300)),
        ("Viterbo-Mahler cross-path", viterbo_cross_path, None),
        ("Lemma sandwich", lemma_sandwich, None),
        ("Report-only constants", report_only, None),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = check();
        let elapsed = started.elapsed();
        let in_budget = budget.is_none_or(|b| elapsed <= Duration::from_secs(b));
        let budget_note = budget.map(|b| format!(", budget {b} s")).unwrap_or_default();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {:>2} {name}: {detail} [{:.2} s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
