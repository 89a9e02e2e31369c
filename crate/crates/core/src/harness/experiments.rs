//! Built-in experiment suites. Each suite expands its config into a grid of
//! independent cells; a cell's seed is derived from the master seed and its
//! index, and rows come back in cell order.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::report::{Cell, ExperimentReport, Meta, Violation};
use super::spec::build_body;
use crate::billiards::{flow, xi_euclidean, FlowConfig, FlowHalt, PhasePoint};
use crate::bodies::{
    is_quarter_symmetric, minkowski_sum, polar, random_symmetric_polytope, unit_ball_volume, ConvexBody, HannerTree,
    Vector,
};
use crate::capacities::{capacity_sandwich, complex_symmetric_bounds, ehz_lagrangian_product, viterbo_ratio, LagrangianProduct};
use crate::error::{Error, Result};
use crate::rng;
use crate::volume::{
    kuperberg_bound, mahler_bound, mahler_volume_with, volume, CheckReport, InequalityKind, VolumeConfig,
};

/// Relative slack used when comparing the two sides of the cross-path booleans.
pub const CROSS_PATH_TOL: f64 = 1e-9;
/// Allowed shortfall in `xi(K1 + K2) >= xi(K1) + xi(K2)`.
pub const SUPERADDITIVITY_TOL: f64 = 1e-5;
/// Boundary residual allowed for recorded bounce states.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MahlerSweep,
    ViterboSweep,
    CapacityGap,
    XiBounds,
    BilliardFlow,
    HannerCensus,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::MahlerSweep,
        Suite::ViterboSweep,
        Suite::CapacityGap,
        Suite::XiBounds,
        Suite::BilliardFlow,
        Suite::HannerCensus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MahlerSweep => "mahler-sweep",
            Suite::ViterboSweep => "viterbo-sweep",
            Suite::CapacityGap => "capacity-gap",
            Suite::XiBounds => "xi-bounds",
            Suite::BilliardFlow => "billiard-flow",
            Suite::HannerCensus => "hanner-census",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

fn default_dims() -> Vec<usize> {
    vec![2]
}

fn default_count() -> usize {
    100
}

fn default_starts() -> usize {
    16
}

fn default_bounces() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Dimensions swept; for capacity-gap, half the phase-space dimension.
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    /// Random bodies per dimension.
    #[serde(default = "default_count")]
    pub count: usize,
    /// Gaussian generators per random polytope; defaults to `n + 3`.
    #[serde(default)]
    pub generators: Option<usize>,
    /// Superadditivity pairs per dimension in xi-bounds; defaults to `count / 2`.
    #[serde(default)]
    pub pairs: Option<usize>,
    /// Use Monte Carlo volumes with this many samples instead of exact ones.
    #[serde(default)]
    pub mc_samples: Option<usize>,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "default_bounces")]
    pub bounces: usize,
    /// Extra body specs appended to mahler-sweep, capacity-gap and xi-bounds.
    #[serde(default)]
    pub bodies: Vec<Value>,
    /// Billiard table `K` for billiard-flow; unit ball by default.
    #[serde(default)]
    pub table: Option<Value>,
    /// Momentum body `T` for billiard-flow; unit ball by default.
    #[serde(default)]
    pub momentum: Option<Value>,
}

impl ExperimentConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        Self {
            suite,
            seed,
            dims: default_dims(),
            count: default_count(),
            generators: None,
            pairs: None,
            mc_samples: None,
            starts: default_starts(),
            bounces: default_bounces(),
            bodies: Vec::new(),
            table: None,
            momentum: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec { path: "$".into(), message: format!("config: {e}") })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec { path: "$".into(), message: format!("cannot read {}: {e}", path.display()) })?;
        Self::from_json(&text)
    }

    /// SHA-256 of the config serialised with defaults filled in.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn generators(&self, n: usize) -> usize {
        self.generators.unwrap_or(n + 3)
    }

    fn volume_config(&self, seed: u64) -> VolumeConfig {
        match self.mc_samples {
            Some(samples) => VolumeConfig::monte_carlo(samples, seed),
            None => VolumeConfig::exact(),
        }
    }
}

#[derive(Default)]
struct CellOut {
    rows: Vec<Vec<Cell>>,
    violations: Vec<String>,
}

impl CellOut {
    fn row(row: Vec<Cell>) -> Self {
        Self { rows: vec![row], violations: Vec::new() }
    }

    fn check(&mut self, r: &CheckReport) {
        if r.violated() {
            self.violations.push(format!("{} violated: lhs {} rhs {} slack {:e}", r.kind, r.lhs, r.rhs, r.slack));
        }
    }

    fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(message());
        }
    }
}

type Job<'a> = Box<dyn Fn(u64) -> Result<CellOut> + Send + Sync + 'a>;

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    validate(config)?;
    let (columns, jobs) = match config.suite {
        Suite::MahlerSweep => owned(mahler_sweep(config)?),
        Suite::ViterboSweep => owned(viterbo_sweep(config)),
        Suite::CapacityGap => owned(capacity_gap(config)?),
        Suite::XiBounds => owned(xi_bounds(config)),
        Suite::BilliardFlow => billiard_flow(config)?,
        Suite::HannerCensus => owned(hanner_census(config)),
    };
    let outputs: Vec<Result<CellOut>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| job(rng::derive_seed(config.seed, i as u64)))
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    let mut violations = Vec::new();
    for (i, out) in outputs.into_iter().enumerate() {
        let out = out.map_err(|e| Error::Row { row: i, source: Box::new(e) })?;
        for message in out.violations {
            violations.push(Violation { row: rows.len(), message });
        }
        rows.extend(out.rows);
    }
    for r in &rows {
        debug_assert_eq!(r.len(), columns.len());
    }
    Ok(ExperimentReport {
        columns,
        rows,
        violations,
        meta: Meta {
            suite: config.suite.name().into(),
            seed: config.seed,
            config_hash: config.hash(),
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_s: started.elapsed().as_secs_f64(),
        },
    })
}

fn owned<'a>((columns, jobs): (Vec<&str>, Vec<Job<'a>>)) -> (Vec<String>, Vec<Job<'a>>) {
    (columns.into_iter().map(String::from).collect(), jobs)
}

fn validate(config: &ExperimentConfig) -> Result<()> {
    if config.dims.is_empty() {
        return Err(Error::InvalidInput("dims must not be empty".into()));
    }
    if config.starts == 0 || config.bounces == 0 {
        return Err(Error::InvalidInput("starts and bounces must be positive".into()));
    }
    Ok(())
}

fn mahler_sweep(config: &ExperimentConfig) -> Result<(Vec<&'static str>, Vec<Job<'_>>)> {
    let columns = vec![
        "cell", "n", "seed", "body", "nu", "vol_k", "vol_polar", "mahler_bound", "mahler_slack", "mahler_asserted",
        "kuperberg_slack", "santalo_slack", "pass",
    ];
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &config.dims {
        for _ in 0..config.count {
            let cell = jobs.len();
            jobs.push(Box::new(move |seed| {
                let k = random_symmetric_polytope(n, config.generators(n), seed)?;
                mahler_row(cell, seed.into(), "random", &k, config, seed)
            }));
        }
    }
    for (i, spec) in config.bodies.iter().enumerate() {
        let k = build_body(spec).map_err(|e| relocate(e, &format!("bodies[{i}]")))?;
        let cell = jobs.len();
        jobs.push(Box::new(move |seed| mahler_row(cell, Cell::Empty, &format!("bodies[{i}]"), &k, config, seed)));
    }
    Ok((columns, jobs))
}

fn mahler_row(cell: usize, seed_cell: Cell, label: &str, k: &ConvexBody, config: &ExperimentConfig, seed: u64) -> Result<CellOut> {
    let n = k.dim();
    let m = mahler_volume_with(k, &config.volume_config(seed))?;
    let mahler = CheckReport::new(InequalityKind::MahlerLower, n, m.nu, m.conjectured_min, seed);
    let kuper = CheckReport::new(InequalityKind::KuperbergLower, n, m.nu, kuperberg_bound(n), seed);
    let santalo = CheckReport::new(InequalityKind::Santalo, n, m.santalo_max, m.nu, seed);
    let pass = mahler.pass && kuper.pass && santalo.pass;
    let mut out = CellOut::row(vec![
        cell.into(),
        n.into(),
        seed_cell,
        label.into(),
        m.nu.into(),
        m.vol_k.into(),
        m.vol_polar.into(),
        m.conjectured_min.into(),
        mahler.slack.into(),
        mahler.asserted.into(),
        kuper.slack.into(),
        santalo.slack.into(),
        pass.into(),
    ]);
    for r in [&mahler, &kuper, &santalo] {
        out.check(r);
    }
    Ok(out)
}

/// Prefixes a spec error path with the config field it came from.
fn relocate(e: Error, field: &str) -> Error {
    match e {
        Error::Spec { path, message } => Error::Spec { path: path.replacen('$', &format!("$.{field}"), 1), message },
        e => Error::Spec { path: format!("$.{field}"), message: e.to_string() },
    }
}

fn viterbo_sweep(config: &ExperimentConfig) -> (Vec<&'static str>, Vec<Job<'_>>) {
    let columns = vec![
        "cell", "n", "seed", "body", "c_ehz", "vol_k", "vol_polar", "nu", "ratio", "ratio_le_one", "nu_ge_bound",
        "agree",
    ];
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &config.dims {
        for i in 0..=config.count {
            let cell = jobs.len();
            jobs.push(Box::new(move |seed| {
                let (body, sigma, seed_cell) = if i == 0 {
                    ("cube", ConvexBody::cube(n, 1.0)?, Cell::Empty)
                } else {
                    ("random", random_symmetric_polytope(n, config.generators(n), seed)?, seed.into())
                };
                let product = LagrangianProduct::new(sigma.clone(), polar(&sigma)?)?;
                let c = ehz_lagrangian_product(&product)?.value.expect("formula value");
                let ratio = viterbo_ratio(&product)?;
                let m = mahler_volume_with(&sigma, &VolumeConfig::exact())?;
                let ratio_le_one = ratio <= 1.0 + CROSS_PATH_TOL;
                let nu_ge_bound = m.nu * (1.0 + CROSS_PATH_TOL).powi(n as i32) >= mahler_bound(n);
                let agree = ratio_le_one == nu_ge_bound;
                let mut out = CellOut::row(vec![
                    cell.into(),
                    n.into(),
                    seed_cell,
                    body.into(),
                    c.into(),
                    m.vol_k.into(),
                    m.vol_polar.into(),
                    m.nu.into(),
                    ratio.into(),
                    ratio_le_one.into(),
                    nu_ge_bound.into(),
                    agree.into(),
                ]);
                out.require(agree, || format!("cross-path disagreement: ratio {ratio}, nu {}", m.nu));
                // the product case of Viterbo's conjecture is Mahler's, proven in the plane
                if n <= 2 {
                    out.require(ratio_le_one, || format!("ratio {ratio} exceeds 1 in dimension {n}"));
                }
                Ok(out)
            }));
        }
    }
    (columns, jobs)
}

type Maker<'a> = Box<dyn Fn(u64) -> Result<ConvexBody> + Send + Sync + 'a>;

fn capacity_gap<'a>(config: &'a ExperimentConfig) -> Result<(Vec<&'static str>, Vec<Job<'a>>)> {
    let columns = vec![
        "cell", "n", "seed", "body", "lower", "upper", "gap_ratio", "quarter_symmetric", "lemma_lower", "lemma_upper",
        "lemma_ratio", "within_4n2", "a_ratio",
    ];
    let mut jobs: Vec<Job> = Vec::new();
    let mut push = |label: String, n: usize, make: Maker<'a>, seeded: bool| {
        let cell = jobs.len();
        jobs.push(Box::new(move |seed| {
            let k = make(seed)?;
            capacity_row(cell, n, if seeded { seed.into() } else { Cell::Empty }, &label, &k)
        }));
    };
    for &n in &config.dims {
        let d = 2 * n;
        push("ball".into(), n, Box::new(move |_| ConvexBody::ball(d, 1.0)), false);
        push("cube".into(), n, Box::new(move |_| ConvexBody::cube(d, 1.0)), false);
        push("cross-polytope".into(), n, Box::new(move |_| ConvexBody::cross_polytope(d)), false);
        for _ in 0..config.count {
            push("random".into(), n, Box::new(move |seed| random_symmetric_polytope(d, config.generators(d), seed)), true);
        }
    }
    for (i, spec) in config.bodies.iter().enumerate() {
        let k = build_body(spec).map_err(|e| relocate(e, &format!("bodies[{i}]")))?;
        if k.dim() % 2 != 0 {
            return Err(Error::Spec { path: format!("$.bodies[{i}]"), message: "phase-space body needs even dimension".into() });
        }
        let n = k.dim() / 2;
        push(format!("bodies[{i}]"), n, Box::new(move |_| Ok(k.clone())), false);
    }
    Ok((columns, jobs))
}

fn capacity_row(cell: usize, n: usize, seed: Cell, label: &str, k: &ConvexBody) -> Result<CellOut> {
    let s = capacity_sandwich(k)?;
    let quarter = is_quarter_symmetric(k)?;
    let lemma = if quarter { Some(complex_symmetric_bounds(k)?) } else { None };
    let gap = s.gap_ratio();
    // report-only: (upper / c(B)) / (Vol(K) / Vol(B))^{1/n}
    let a_ratio = volume(k, &VolumeConfig::exact())
        .ok()
        .map(|v| (s.upper / PI) / (v.value / unit_ball_volume(2 * n)).powf(1.0 / n as f64));
    let mut out = CellOut::row(vec![
        cell.into(),
        n.into(),
        seed,
        label.into(),
        s.lower.into(),
        s.upper.into(),
        gap.into(),
        quarter.into(),
        lemma.as_ref().map(|l| l.lower).into(),
        lemma.as_ref().map(|l| l.upper).into(),
        lemma.as_ref().map(|l| l.upper / l.lower).into(),
        (gap <= 4.0 * (n * n) as f64).into(),
        a_ratio.into(),
    ]);
    out.require(s.lower <= s.upper * (1.0 + 1e-12), || format!("sandwich inverted: {} > {}", s.lower, s.upper));
    if let Some(l) = &lemma {
        out.require((l.upper / l.lower - 4.0 / PI).abs() <= 1e-12, || "lemma ratio differs from 4/pi".into());
        out.require((l.lower - s.lower).abs() <= 1e-12 * s.lower, || "lemma lower bound differs from inscribed ball".into());
    }
    Ok(out)
}

fn xi_bounds(config: &ExperimentConfig) -> (Vec<&'static str>, Vec<Job<'_>>) {
    let columns = vec![
        "cell", "kind", "n", "seed", "xi", "inrad", "bounds_ok", "volume_ratio", "xi_1", "xi_2", "superadditive_slack",
        "superadditive",
    ];
    let mut jobs: Vec<Job> = Vec::new();
    let starts = config.starts;
    for &n in &config.dims {
        for _ in 0..config.count {
            let cell = jobs.len();
            jobs.push(Box::new(move |seed| {
                let k = random_symmetric_polytope(n, config.generators(n), seed)?;
                xi_body_row(cell, n, seed.into(), &k, starts, seed)
            }));
        }
    }
    for (i, spec) in config.bodies.iter().enumerate() {
        let cell = jobs.len();
        let spec = spec.clone();
        jobs.push(Box::new(move |seed| {
            let k = build_body(&spec).map_err(|e| relocate(e, &format!("bodies[{i}]")))?;
            xi_body_row(cell, k.dim(), Cell::Empty, &k, starts, seed)
        }));
    }
    for &n in &config.dims {
        for _ in 0..config.pairs.unwrap_or(config.count / 2) {
            let cell = jobs.len();
            jobs.push(Box::new(move |seed| {
                let m = config.generators(n);
                let k1 = random_symmetric_polytope(n, m, rng::derive_seed(seed, 1))?;
                let k2 = random_symmetric_polytope(n, m, rng::derive_seed(seed, 2))?;
                let sum = minkowski_sum(&k1, &k2)?;
                let x1 = xi_euclidean(&k1, starts, seed)?.xi;
                let x2 = xi_euclidean(&k2, starts, seed)?.xi;
                let xs = xi_euclidean(&sum, starts, seed)?;
                let slack = xs.xi - x1 - x2;
                let ok = slack >= -SUPERADDITIVITY_TOL;
                let mut out = CellOut::row(vec![
                    cell.into(),
                    "pair".into(),
                    n.into(),
                    seed.into(),
                    xs.xi.into(),
                    xs.inrad.into(),
                    xs.bounds_ok.into(),
                    xs.volume_ratio.into(),
                    x1.into(),
                    x2.into(),
                    slack.into(),
                    ok.into(),
                ]);
                out.require(ok, || format!("superadditivity fails: {} < {} + {}", xs.xi, x1, x2));
                out.require(xs.bounds_ok, || format!("xi bounds fail on the sum: xi {} inrad {}", xs.xi, xs.inrad));
                Ok(out)
            }));
        }
    }
    (columns, jobs)
}

fn xi_body_row(cell: usize, n: usize, seed_cell: Cell, k: &ConvexBody, starts: usize, seed: u64) -> Result<CellOut> {
    let x = xi_euclidean(k, starts, seed)?;
    let mut out = CellOut::row(vec![
        cell.into(),
        "body".into(),
        n.into(),
        seed_cell,
        x.xi.into(),
        x.inrad.into(),
        x.bounds_ok.into(),
        x.volume_ratio.into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
    ]);
    out.require(x.bounds_ok, || format!("xi bounds fail: xi {} inrad {}", x.xi, x.inrad));
    Ok(out)
}

fn billiard_flow(config: &ExperimentConfig) -> Result<(Vec<String>, Vec<Job<'_>>)> {
    let n = config.dims[0];
    let k = match &config.table {
        Some(v) => build_body(v).map_err(|e| relocate(e, "table"))?,
        None => ConvexBody::ball(n, 1.0)?,
    };
    let t = match &config.momentum {
        Some(v) => build_body(v).map_err(|e| relocate(e, "momentum"))?,
        None => ConvexBody::ball(n, 1.0)?,
    };
    if k.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: t.dim() });
    }
    let n = k.dim();
    let mut columns: Vec<String> = vec!["cell".into(), "seed".into()];
    columns.extend((0..n).map(|i| format!("q{i}")));
    columns.extend((0..n).map(|i| format!("p{i}")));
    columns.extend(
        ["halt", "bounces", "closed", "period_length", "closure_residual", "max_boundary_residual"].map(String::from),
    );
    let cfg = FlowConfig::with_bounces(config.bounces);
    let mut jobs: Vec<Job> = Vec::new();
    for cell in 0..config.count {
        let (k, t) = (k.clone(), t.clone());
        jobs.push(Box::new(move |seed| {
            let start = if cell == 0 {
                let mut e = Vector::zeros(n);
                e[0] = 1.0;
                PhasePoint::new(Vector::zeros(n), &e / t.g(&e))
            } else {
                let mut s = rng::stream(seed, 0);
                let u = Vector::from_fn(n, |_, _| s.sample::<f64, _>(StandardNormal));
                let w = Vector::from_fn(n, |_, _| s.sample::<f64, _>(StandardNormal));
                let radius: f64 = 0.9 * s.random::<f64>();
                PhasePoint::new(&u * (radius / k.g(&u)), &w / t.g(&w))
            };
            let rec = flow(&k, &t, &start, &cfg)?;
            let residual = rec
                .bounces
                .iter()
                .map(|b| (k.g(&b.q) - 1.0).abs().max((t.g(&b.p) - 1.0).abs()))
                .fold(0.0, f64::max);
            let halt = match rec.halt {
                FlowHalt::Closed { .. } => "closed",
                FlowHalt::MaxBounces => "max-bounces",
                FlowHalt::Gliding { .. } => "gliding-suspected",
            };
            let mut row: Vec<Cell> = vec![cell.into(), if cell == 0 { Cell::Empty } else { seed.into() }];
            row.extend(start.q.iter().map(|&x| Cell::Float(x)));
            row.extend(start.p.iter().map(|&x| Cell::Float(x)));
            row.extend([
                halt.into(),
                rec.bounces.len().into(),
                rec.orbit.closed.into(),
                if rec.orbit.closed { Cell::Float(rec.orbit.length) } else { Cell::Empty },
                Cell::from(Some(rec.closure_residual).filter(|r| r.is_finite())),
                residual.into(),
            ]);
            let mut out = CellOut::row(row);
            out.require(residual <= BOUNDARY_TOL, || format!("bounce left the boundary by {residual:e}"));
            Ok(out)
        }));
    }
    Ok((columns, jobs))
}

fn hanner_census(config: &ExperimentConfig) -> (Vec<&'static str>, Vec<Job<'_>>) {
    let columns = vec!["cell", "n", "tree", "nu", "bound", "rel_error", "pass"];
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &config.dims {
        for tree in HannerTree::enumerate(n) {
            let cell = jobs.len();
            jobs.push(Box::new(move |_| {
                let k = tree.build()?;
                let m = mahler_volume_with(&k, &VolumeConfig::exact())?;
                let bound = mahler_bound(n);
                let rel = (m.nu - bound).abs() / bound;
                let pass = rel <= 1e-9;
                let mut out = CellOut::row(vec![
                    cell.into(),
                    n.into(),
                    tree.to_string().into(),
                    m.nu.into(),
                    bound.into(),
                    rel.into(),
                    pass.into(),
                ]);
                out.require(pass, || format!("{tree}: nu {} differs from {bound}", m.nu));
                Ok(out)
            }));
        }
    }
    (columns, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn config_parsing_and_hash() {
        let c = ExperimentConfig::from_json(r#"{"suite": "mahler-sweep", "seed": 3, "count": 5}"#).unwrap();
        assert_eq!(c.dims, vec![2]);
        assert_eq!(c.hash(), ExperimentConfig::from_json(r#"{"seed": 3, "count": 5, "suite": "mahler-sweep"}"#).unwrap().hash());
        assert!(ExperimentConfig::from_json(r#"{"suite": "mahler-sweep"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite": "bogus", "seed": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"suite": "mahler-sweep", "seed": 1, "typo": 1}"#).is_err());
    }

    #[test]
    fn small_mahler_sweep_is_deterministic() {
        let mut c = ExperimentConfig::new(Suite::MahlerSweep, 9);
        c.count = 6;
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a.rows.len(), 6);
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.violations.is_empty());
    }

    #[test]
    fn hanner_census_rows() {
        let mut c = ExperimentConfig::new(Suite::HannerCensus, 0);
        c.dims = vec![3];
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn viterbo_cube_row_first() {
        let mut c = ExperimentConfig::new(Suite::ViterboSweep, 1);
        c.count = 3;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert_eq!(r.rows[0][3], Cell::Text("cube".into()));
        let ratio = r.column("ratio").unwrap();
        match r.rows[0][ratio] {
            Cell::Float(x) => assert!((x - 1.0).abs() < 1e-9),
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn capacity_gap_with_extra_body() {
        let mut c = ExperimentConfig::new(Suite::CapacityGap, 2);
        c.count = 1;
        c.bodies = vec![serde_json::json!({"kind": "cube", "n": 3})];
        assert!(run_experiment(&c).is_err());
        c.bodies = vec![serde_json::json!({"kind": "cube", "n": 2})];
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.rows.len(), 5);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}
