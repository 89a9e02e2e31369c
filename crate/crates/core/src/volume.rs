//! Exact and Monte Carlo volume, the Mahler volume product, and checks of the
//! classical volume inequalities.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::{linear_image, minkowski_sum, polar, unit_ball_volume, ConvexBody, Rep, Vector};
use crate::error::{Error, Result};
use crate::rng;

/// Smallest accepted Monte Carlo sample count.
pub const MIN_MC_SAMPLES: usize = 1_000;
/// Samples drawn from one seeded stream.
const MC_CHUNK: usize = 1 << 16;
/// Relative slack below which an inequality counts as violated.
pub const CHECK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    Exact,
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Fan decomposition for polytopes, closed forms for ellipsoids and p-balls.
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeConfig {
    pub method: Method,
    pub samples: usize,
    pub seed: u64,
}

impl VolumeConfig {
    pub fn exact() -> Self {
        Self { method: Method::Exact, samples: 0, seed: 0 }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self { method: Method::MonteCarlo, samples, seed }
    }
}

impl Default for VolumeConfig {
    fn default() -> Self {
        Self::exact()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub value: f64,
    pub method: VolumeMethod,
    /// Half-width of the 95% confidence interval relative to `value`; zero
    /// for exact results.
    pub rel_error_bound: f64,
    pub samples: usize,
    pub seed: u64,
}

pub fn volume(k: &ConvexBody, cfg: &VolumeConfig) -> Result<VolumeResult> {
    match cfg.method {
        Method::Exact => exact_volume(k),
        Method::MonteCarlo => monte_carlo_volume(k, cfg.samples, cfg.seed),
    }
}

fn exact_volume(k: &ConvexBody) -> Result<VolumeResult> {
    let (value, method) = match k.rep() {
        Rep::V(v) => (v.hull().volume(), VolumeMethod::Exact),
        Rep::H(h) => (h.hull()?.volume(), VolumeMethod::Exact),
        Rep::Ellipsoid(e) => (e.volume(), VolumeMethod::ClosedForm),
        Rep::PBall(b) => (b.volume(), VolumeMethod::ClosedForm),
        Rep::Oracle(_) => {
            return Err(Error::Unsupported("exact volume needs a polytope, ellipsoid or p-ball".into()));
        }
    };
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Degenerate(format!("volume {value}")));
    }
    Ok(VolumeResult { value, method, rel_error_bound: 0.0, samples: 0, seed: 0 })
}

fn membership(k: &ConvexBody) -> impl Fn(&Vector) -> bool + '_ {
    let halfspaces = k.halfspaces();
    move |x: &Vector| match &halfspaces {
        Some((a, b)) => a.iter().zip(b).all(|(a, b)| a.dot(x) <= *b),
        None => k.g(x) <= 1.0,
    }
}

fn monte_carlo_volume(k: &ConvexBody, samples: usize, seed: u64) -> Result<VolumeResult> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidInput(format!("Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}")));
    }
    let n = k.dim();
    let mut lo = Vector::zeros(n);
    let mut hi = Vector::zeros(n);
    for i in 0..n {
        let mut e = Vector::zeros(n);
        e[i] = 1.0;
        hi[i] = k.h(&e);
        lo[i] = -k.h(&-e);
        if !(hi[i] > lo[i]) {
            return Err(Error::Degenerate("bounding box is flat".into()));
        }
    }
    let box_volume: f64 = (0..n).map(|i| hi[i] - lo[i]).product();
    let inside = membership(k);
    let chunks = samples.div_ceil(MC_CHUNK);
    let mut hits = 0usize;
    let mut x = Vector::zeros(n);
    for c in 0..chunks {
        let mut stream = rng::stream(seed, c as u64);
        let count = MC_CHUNK.min(samples - c * MC_CHUNK);
        for _ in 0..count {
            for i in 0..n {
                x[i] = lo[i] + (hi[i] - lo[i]) * stream.random::<f64>();
            }
            if inside(&x) {
                hits += 1;
            }
        }
    }
    if hits == 0 {
        return Err(Error::Degenerate("no Monte Carlo sample hit the body".into()));
    }
    let p = hits as f64 / samples as f64;
    let rel_error_bound = 1.96 * ((1.0 - p) / (p * samples as f64)).sqrt();
    Ok(VolumeResult { value: p * box_volume, method: VolumeMethod::MonteCarlo, rel_error_bound, samples, seed })
}

/// `Vol(K) · Vol(K°)` alongside the conjectured minimum and the Santaló
/// maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MahlerResult {
    pub n: usize,
    pub nu: f64,
    pub vol_k: f64,
    pub vol_polar: f64,
    /// `4^n / n!`
    pub conjectured_min: f64,
    /// `kappa_n^2`
    pub santalo_max: f64,
}

pub fn mahler_volume(k: &ConvexBody) -> Result<MahlerResult> {
    mahler_volume_with(k, &VolumeConfig::exact())
}

pub fn mahler_volume_with(k: &ConvexBody, cfg: &VolumeConfig) -> Result<MahlerResult> {
    if !k.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let n = k.dim();
    let vol_k = volume(k, cfg)?.value;
    let vol_polar = volume(&polar(k)?, cfg)?.value;
    Ok(MahlerResult {
        n,
        nu: vol_k * vol_polar,
        vol_k,
        vol_polar,
        conjectured_min: mahler_bound(n),
        santalo_max: unit_ball_volume(n).powi(2),
    })
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `4^n / n!`.
pub fn mahler_bound(n: usize) -> f64 {
    4f64.powi(n as i32) / factorial(n)
}

/// `(pi/4)^n · 4^n / n! = pi^n / n!`.
pub fn kuperberg_bound(n: usize) -> f64 {
    (std::f64::consts::PI / 4.0).powi(n as i32) * mahler_bound(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    /// `Vol(A+B)^{1/n} >= Vol(A)^{1/n} + Vol(B)^{1/n}`
    BrunnMinkowski,
    /// `Vol(K + (-K)) <= 4^n Vol(K)`
    RogersShephard,
    /// `nu <= kappa_n^2`
    Santalo,
    /// `nu >= 4^n / n!`, asserted only for `n <= 2`
    MahlerLower,
    /// `nu >= (pi/4)^n 4^n / n!`
    KuperbergLower,
}

impl InequalityKind {
    pub fn arity(self) -> usize {
        match self {
            Self::BrunnMinkowski => 2,
            _ => 1,
        }
    }

    pub fn needs_symmetry(self) -> bool {
        matches!(self, Self::Santalo | Self::MahlerLower | Self::KuperbergLower)
    }

    /// Whether a failure is a contradiction with a proven statement rather
    /// than a data point about an open one.
    pub fn asserted(self, n: usize) -> bool {
        match self {
            Self::MahlerLower => n <= 2,
            _ => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::BrunnMinkowski => "brunn-minkowski",
            Self::RogersShephard => "rogers-shephard",
            Self::Santalo => "santalo",
            Self::MahlerLower => "mahler-lower",
            Self::KuperbergLower => "kuperberg-lower",
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for InequalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "brunn-minkowski" => Self::BrunnMinkowski,
            "rogers-shephard" => Self::RogersShephard,
            "santalo" => Self::Santalo,
            "mahler-lower" => Self::MahlerLower,
            "kuperberg-lower" => Self::KuperbergLower,
            other => return Err(Error::InvalidInput(format!("unknown inequality '{other}'"))),
        })
    }
}

/// One evaluated inequality, oriented so that `slack = lhs - rhs >= 0` means
/// it holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub kind: InequalityKind,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub asserted: bool,
    pub seed: u64,
}

impl CheckReport {
    pub const CSV_HEADER: &'static str = "kind,n,lhs,rhs,slack,pass,seed";

    /// Evaluates `lhs >= rhs` at the relative tolerance [`CHECK_TOL`].
    pub fn new(kind: InequalityKind, n: usize, lhs: f64, rhs: f64, seed: u64) -> Self {
        let slack = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs());
        let pass = slack >= -CHECK_TOL * scale;
        Self { kind, n, lhs, rhs, slack, pass, asserted: kind.asserted(n), seed }
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.17e},{:.17e},{:.17e},{},{}", self.kind, self.n, self.lhs, self.rhs, self.slack, self.pass, self.seed)
    }

    /// An asserted inequality that failed.
    pub fn violated(&self) -> bool {
        self.asserted && !self.pass
    }
}

pub fn inequality_check(kind: InequalityKind, bodies: &[ConvexBody], cfg: &VolumeConfig) -> Result<CheckReport> {
    if bodies.len() != kind.arity() {
        return Err(Error::InvalidInput(format!("{kind} takes {} bodies, got {}", kind.arity(), bodies.len())));
    }
    if kind.needs_symmetry() && !bodies[0].is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let k = &bodies[0];
    let n = k.dim();
    let (lhs, rhs) = match kind {
        InequalityKind::BrunnMinkowski => {
            let b = &bodies[1];
            if b.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
            }
            let root = |v: f64| v.powf(1.0 / n as f64);
            let sum = minkowski_sum(k, b)?;
            (root(volume(&sum, cfg)?.value), root(volume(k, cfg)?.value) + root(volume(b, cfg)?.value))
        }
        InequalityKind::RogersShephard => {
            let neg = linear_image(k, &(-DMatrix::identity(n, n)))?;
            let diff = minkowski_sum(k, &neg)?;
            (4f64.powi(n as i32) * volume(k, cfg)?.value, volume(&diff, cfg)?.value)
        }
        InequalityKind::Santalo => (unit_ball_volume(n).powi(2), mahler_volume_with(k, cfg)?.nu),
        InequalityKind::MahlerLower => (mahler_volume_with(k, cfg)?.nu, mahler_bound(n)),
        InequalityKind::KuperbergLower => (mahler_volume_with(k, cfg)?.nu, kuperberg_bound(n)),
    };
    Ok(CheckReport::new(kind, n, lhs, rhs, cfg.seed))
}
