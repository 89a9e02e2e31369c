use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use symlab::billiards::{flow, shortest_closed, summary_json, trajectory_csv, FlowConfig, FlowHalt, PhasePoint};
use symlab::capacities::{
    capacity_sandwich, complex_symmetric_bounds, ehz_lagrangian_product, viterbo_ratio, CapacityEstimate,
    LagrangianProduct,
};
use symlab::bodies::is_quarter_symmetric;
use symlab::harness::{load_body_spec, run_experiment, ExperimentConfig, Suite};
use symlab::volume::{kuperberg_bound, mahler_volume_with, volume, CheckReport, InequalityKind, VolumeConfig};
use symlab::{ConvexBody, Error, Result, Vector};

/// Convex bodies, Minkowski billiards and capacities of Lagrangian products.
///
/// Body arguments are JSON specs, given inline (starting with `{`) or as a
/// file path. Exit status is 0 on success, 1 on errors, 2 on usage errors
/// and 3 when an asserted inequality fails.
#[derive(Parser)]
#[command(name = "symlab", version)]
struct Cli {
    /// Also write the tabular output as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Also write the output as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a body spec.
    Body {
        #[command(subcommand)]
        action: BodyCmd,
    },
    /// Volume, exact where possible.
    Volume {
        spec: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Mahler volume with its lower and upper bounds.
    Mahler {
        spec: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Symplectic capacity estimates.
    Capacity {
        #[command(subcommand)]
        action: CapacityCmd,
    },
    /// Minkowski billiards in K with geometry T.
    Billiard {
        #[command(subcommand)]
        action: BilliardCmd,
    },
    /// Run a built-in experiment suite.
    Verify {
        suite: Suite,
        /// JSON experiment config; its suite must match.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the number of random bodies per dimension.
        #[arg(long)]
        count: Option<usize>,
        /// Overrides the optimizer starts.
        #[arg(long)]
        starts: Option<usize>,
        /// Overrides the bounce budget.
        #[arg(long)]
        bounces: Option<usize>,
        /// Overrides the Monte Carlo sample count (exact volumes when unset).
        #[arg(long)]
        mc_samples: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BodyCmd {
    Show { spec: String },
}

#[derive(Subcommand)]
enum CapacityCmd {
    /// Closed-form c_EHZ of K × T for symmetric K and T.
    Ehz { spec_k: String, spec_t: String },
    /// Inscribed-ball and projection-disc bounds for a body in R^{2n}.
    Sandwich { spec: String },
}

#[derive(Subcommand)]
enum BilliardCmd {
    /// Follow the characteristic flow from (q, p); p is rescaled onto ∂T.
    Flow {
        spec_k: String,
        spec_t: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        q: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        bounces: usize,
    },
    /// Search for the shortest closed trajectory.
    Shortest {
        spec_k: String,
        spec_t: String,
        /// Largest bounce count tried; defaults to n + 1.
        #[arg(long)]
        mmax: Option<usize>,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct McArgs {
    /// Estimate volumes by Monte Carlo with this many samples.
    #[arg(long, value_name = "N")]
    mc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl McArgs {
    fn config(&self) -> VolumeConfig {
        match self.mc {
            Some(n) => VolumeConfig::monte_carlo(n, self.seed),
            None => VolumeConfig::exact(),
        }
    }
}

struct Output {
    table: String,
    csv: String,
    json: Value,
    /// Asserted checks that failed.
    violations: Vec<String>,
}

impl Output {
    fn new(table: String, csv: String, json: Value) -> Self {
        Self { table, csv, json, violations: Vec::new() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command).and_then(|out| emit(&cli, out)) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in &violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<Vec<String>> {
    print!("{}", out.table);
    if let Some(path) = &cli.csv {
        write(path, &out.csv)?;
    }
    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&out.json).expect("json serializes");
        write(path, &(text + "\n"))?;
    }
    Ok(out.violations)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Body { action: BodyCmd::Show { spec } } => body_show(&load_body_spec(spec)?),
        Command::Volume { spec, mc } => volume_cmd(&load_body_spec(spec)?, &mc.config()),
        Command::Mahler { spec, mc } => mahler_cmd(&load_body_spec(spec)?, &mc.config()),
        Command::Capacity { action: CapacityCmd::Ehz { spec_k, spec_t } } => {
            ehz_cmd(load_body_spec(spec_k)?, load_body_spec(spec_t)?)
        }
        Command::Capacity { action: CapacityCmd::Sandwich { spec } } => sandwich_cmd(&load_body_spec(spec)?),
        Command::Billiard { action: BilliardCmd::Flow { spec_k, spec_t, q, p, bounces } } => {
            flow_cmd(&load_body_spec(spec_k)?, &load_body_spec(spec_t)?, q, p, *bounces)
        }
        Command::Billiard { action: BilliardCmd::Shortest { spec_k, spec_t, mmax, starts, seed } } => {
            let k = load_body_spec(spec_k)?;
            shortest_cmd(&k, &load_body_spec(spec_t)?, mmax.unwrap_or(k.dim() + 1), *starts, *seed)
        }
        Command::Verify { suite, config, seed, count, starts, bounces, mc_samples } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::new(
                    *suite,
                    seed.ok_or_else(|| Error::InvalidInput("verify needs --config or --seed".into()))?,
                ),
            };
            if cfg.suite != *suite {
                return Err(Error::InvalidInput(format!("config is for suite {}, not {suite}", cfg.suite)));
            }
            if let Some(v) = seed {
                cfg.seed = *v;
            }
            if let Some(v) = count {
                cfg.count = *v;
            }
            if let Some(v) = starts {
                cfg.starts = *v;
            }
            if let Some(v) = bounces {
                cfg.bounces = *v;
            }
            if mc_samples.is_some() {
                cfg.mc_samples = *mc_samples;
            }
            verify_cmd(&cfg)
        }
    }
}

fn key_values(pairs: &[(&str, String)]) -> (String, String) {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let table = pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect();
    let csv = std::iter::once("field,value\n".to_string())
        .chain(pairs.iter().map(|(k, v)| format!("{k},{v}\n")))
        .collect();
    (table, csv)
}

fn coords(v: &Vector) -> String {
    v.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>().join(" ")
}

fn body_show(k: &ConvexBody) -> Result<Output> {
    let vertices = k.vertices().map(|vs| vs.iter().map(|v| v.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>());
    let facets = k.halfspaces().map(|(a, _)| a.len());
    let mut pairs = vec![
        ("kind", k.kind().to_string()),
        ("dim", k.dim().to_string()),
        ("symmetric", k.is_symmetric().to_string()),
        ("smooth", k.is_smooth().to_string()),
        ("description", k.to_string()),
    ];
    if let Some(f) = facets {
        pairs.push(("facets", f.to_string()));
    }
    if let Some(vs) = &vertices {
        pairs.push(("vertices", vs.len().to_string()));
    }
    let (mut table, csv) = key_values(&pairs);
    if let Some(vs) = k.vertices() {
        for v in vs {
            table.push_str(&format!("  {}\n", coords(v)));
        }
    }
    let json = json!({
        "kind": k.kind(),
        "dim": k.dim(),
        "symmetric": k.is_symmetric(),
        "smooth": k.is_smooth(),
        "description": k.to_string(),
        "facets": facets,
        "vertices": vertices,
    });
    Ok(Output::new(table, csv, json))
}

fn volume_cmd(k: &ConvexBody, cfg: &VolumeConfig) -> Result<Output> {
    let v = volume(k, cfg)?;
    let pairs = [
        ("value", format!("{:.17e}", v.value)),
        ("method", format!("{:?}", v.method)),
        ("rel_error_bound", format!("{:e}", v.rel_error_bound)),
        ("samples", v.samples.to_string()),
        ("seed", v.seed.to_string()),
    ];
    let (table, _) = key_values(&pairs);
    let csv = format!(
        "value,method,rel_error_bound,samples,seed\n{:.17e},{:?},{:e},{},{}\n",
        v.value, v.method, v.rel_error_bound, v.samples, v.seed
    );
    let json = json!({
        "value": v.value,
        "method": format!("{:?}", v.method),
        "rel_error_bound": v.rel_error_bound,
        "samples": v.samples,
        "seed": v.seed,
    });
    Ok(Output::new(table, csv, json))
}

fn mahler_cmd(k: &ConvexBody, cfg: &VolumeConfig) -> Result<Output> {
    let m = mahler_volume_with(k, cfg)?;
    let n = m.n;
    let checks = [
        CheckReport::new(InequalityKind::MahlerLower, n, m.nu, m.conjectured_min, cfg.seed),
        CheckReport::new(InequalityKind::KuperbergLower, n, m.nu, kuperberg_bound(n), cfg.seed),
        CheckReport::new(InequalityKind::Santalo, n, m.santalo_max, m.nu, cfg.seed),
    ];
    let mut table = key_values(&[
        ("n", n.to_string()),
        ("vol_k", format!("{:.12}", m.vol_k)),
        ("vol_polar", format!("{:.12}", m.vol_polar)),
        ("nu", format!("{:.12}", m.nu)),
    ])
    .0;
    table.push_str(&format!("\n{:<16} {:>18} {:>18} {:>12}  {:<5}  asserted\n", "check", "lhs", "rhs", "slack", "pass"));
    let mut csv = format!("{}\n", CheckReport::CSV_HEADER);
    let mut violations = Vec::new();
    for c in &checks {
        table.push_str(&format!(
            "{:<16} {:>18.12} {:>18.12} {:>12.3e}  {:<5}  {}\n",
            c.kind.to_string(),
            c.lhs,
            c.rhs,
            c.slack,
            c.pass,
            c.asserted
        ));
        csv.push_str(&c.csv_row());
        csv.push('\n');
        if c.violated() {
            violations.push(format!("{}: lhs {} < rhs {}", c.kind, c.lhs, c.rhs));
        }
    }
    let json = json!({ "n": n, "vol_k": m.vol_k, "vol_polar": m.vol_polar, "nu": m.nu, "checks": checks });
    Ok(Output { table, csv, json, violations })
}

fn estimate_table(estimates: &[CapacityEstimate]) -> (String, String) {
    let mut table = format!("{:<12} {:>3} {:>16} {:>16} {:>16} {:>10}  witness\n", "method", "n", "lower", "value", "upper", "gap");
    let mut csv = format!("{}\n", CapacityEstimate::CSV_HEADER);
    for e in estimates {
        let value = e.value.map(|v| format!("{v:.12}")).unwrap_or_else(|| "-".into());
        let witness = e.csv_row().splitn(7, ',').nth(6).unwrap_or_default().to_string();
        table.push_str(&format!(
            "{:<12} {:>3} {:>16.12} {:>16} {:>16.12} {:>10.6}  {witness}\n",
            e.method.to_string(),
            e.n,
            e.lower,
            value,
            e.upper,
            e.gap_ratio()
        ));
        csv.push_str(&e.csv_row());
        csv.push('\n');
    }
    (table, csv)
}

fn ehz_cmd(k: ConvexBody, t: ConvexBody) -> Result<Output> {
    let product = LagrangianProduct::new(k, t)?;
    let e = ehz_lagrangian_product(&product)?;
    let ratio = viterbo_ratio(&product)?;
    let (mut table, csv) = estimate_table(std::slice::from_ref(&e));
    table.push_str(&format!("viterbo ratio {ratio:.12}\n"));
    let json = json!({ "estimate": e, "viterbo_ratio": ratio });
    Ok(Output::new(table, csv, json))
}

fn sandwich_cmd(k: &ConvexBody) -> Result<Output> {
    let mut estimates = vec![capacity_sandwich(k)?];
    if is_quarter_symmetric(k)? {
        estimates.push(complex_symmetric_bounds(k)?);
    }
    let (table, csv) = estimate_table(&estimates);
    Ok(Output::new(table, csv, json!({ "estimates": estimates })))
}

fn flow_cmd(k: &ConvexBody, t: &ConvexBody, q: &[f64], p: &[f64], bounces: usize) -> Result<Output> {
    let q = Vector::from_column_slice(q);
    let p = Vector::from_column_slice(p);
    if p.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: p.len() });
    }
    let g = t.g(&p);
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidInput("momentum must be non-zero".into()));
    }
    let rec = flow(k, t, &PhasePoint::new(q, p / g), &FlowConfig::with_bounces(bounces))?;
    let halt = match rec.halt {
        FlowHalt::Closed { period } => format!("closed after {period} bounces"),
        FlowHalt::MaxBounces => "bounce budget exhausted".into(),
        FlowHalt::Gliding { inner } => format!("gliding suspected (inner product {inner:e})"),
    };
    let mut table = key_values(&[
        ("halt", halt),
        ("visited", rec.bounces.len().to_string()),
        ("period_length", if rec.orbit.closed { format!("{:.12}", rec.orbit.length) } else { "-".into() }),
        ("closure_residual", format!("{:e}", rec.closure_residual)),
    ])
    .0;
    for (j, b) in rec.bounces.iter().enumerate() {
        table.push_str(&format!("{j:>4}  q = ({})  p = ({})\n", coords(&b.q), coords(&b.p)));
    }
    let mut json = summary_json(&rec.orbit, Some(rec.closure_residual));
    json["halt"] = match rec.halt {
        FlowHalt::Closed { period } => json!({ "kind": "closed", "period": period }),
        FlowHalt::MaxBounces => json!({ "kind": "max-bounces" }),
        FlowHalt::Gliding { inner } => json!({ "kind": "gliding-suspected", "inner": inner }),
    };
    json["visited"] =
        json!(rec.bounces.iter().map(|b| json!({ "q": b.q.as_slice(), "p": b.p.as_slice() })).collect::<Vec<_>>());
    Ok(Output::new(table, trajectory_csv(&rec.orbit, t), json))
}

fn shortest_cmd(k: &ConvexBody, t: &ConvexBody, m_max: usize, starts: usize, seed: u64) -> Result<Output> {
    let traj = shortest_closed(k, t, m_max, starts, seed)?;
    let mut pairs = vec![
        ("length", format!("{:.12}", traj.length)),
        ("bounces", traj.bounces().to_string()),
        ("kind", traj.kind.to_string()),
    ];
    // closed form for symmetric pairs, as a cross-check
    let formula = if k.is_symmetric() && t.is_symmetric() {
        Some(ehz_lagrangian_product(&LagrangianProduct::new(k.clone(), t.clone())?)?.value.expect("formula value"))
    } else {
        None
    };
    if let Some(f) = formula {
        pairs.push(("4 inrad", format!("{f:.12}")));
    }
    let mut table = key_values(&pairs).0;
    for (j, (q, p)) in traj.bounce_points.iter().zip(&traj.momenta).enumerate() {
        table.push_str(&format!("{j:>4}  q = ({})  p = ({})\n", coords(q), coords(p)));
    }
    let mut json = summary_json(&traj, None);
    json["ehz_formula"] = json!(formula);
    json["points"] = json!(traj.bounce_points.iter().map(|q| q.as_slice().to_vec()).collect::<Vec<_>>());
    Ok(Output::new(table, trajectory_csv(&traj, t), json))
}

fn verify_cmd(cfg: &ExperimentConfig) -> Result<Output> {
    let report = run_experiment(cfg)?;
    let mut table = report.to_table();
    table.push_str(&format!(
        "{}: {} rows, {} violations, seed {}, config {}\n",
        report.meta.suite,
        report.rows.len(),
        report.violations.len(),
        report.meta.seed,
        &report.meta.config_hash[..12]
    ));
    let violations = report.violations.iter().map(|v| format!("row {}: {}", v.row, v.message)).collect();
    Ok(Output { table, csv: report.to_csv(), json: report.to_json(), violations })
}
