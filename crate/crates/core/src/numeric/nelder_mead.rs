//! Derivative-free simplex descent.
//!
//! Standard Nelder–Mead with reflection, expansion, contraction and shrink,
//! plus a restart wrapper that rebuilds the simplex around the incumbent until
//! a restart no longer improves it. The restarts matter on the kinked
//! objectives that show up with polytopal bodies.

#[derive(Debug, Clone)]
pub struct NelderMeadConfig {
    /// Initial edge length of the simplex, per coordinate.
    pub step: f64,
    /// Terminate when the spread of simplex values falls below
    /// `ftol * (|f_best| + 1e-300)`.
    pub ftol: f64,
    /// Terminate when the simplex diameter falls below this.
    pub xtol: f64,
    pub max_evals: usize,
    /// Upper bound on restarts in [`minimize_restarting`].
    pub max_restarts: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self { step: 0.25, ftol: 1e-12, xtol: 1e-12, max_evals: 20_000, max_restarts: 8 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// One Nelder–Mead run from `x0`.
pub fn minimize<F>(f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(n >= 1, "Nelder-Mead needs at least one parameter");
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        let h = if x[i].abs() > 1e-8 { cfg.step * x[i].abs().max(0.1) } else { cfg.step };
        x[i] += h;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = (worst - best).abs();
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        // a flat spread alone can also mean vertices straddling the minimum
        let x_scale = 1.0 + simplex[0].0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if best.is_finite() && spread <= cfg.ftol * (best.abs() + 1e-300) && diameter <= 1e-4 * x_scale {
            converged = true;
            break;
        }
        if diameter <= cfg.xtol {
            converged = best.is_finite();
            break;
        }
        if evals.get() >= cfg.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst_x = simplex[n].0.clone();
        let along = |coef: f64, out: &mut Vec<f64>| {
            for k in 0..n {
                out[k] = centroid[k] + coef * (worst_x[k] - centroid[k]);
            }
        };

        along(-ALPHA, &mut trial);
        let fr = eval(&trial);
        if fr < simplex[0].1 {
            let reflected = trial.clone();
            along(-ALPHA * GAMMA, &mut trial);
            let fe = eval(&trial);
            simplex[n] = if fe < fr { (trial.clone(), fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (trial.clone(), fr);
            continue;
        }
        // contraction, outside or inside
        let (coef, reference) = if fr < simplex[n].1 { (-RHO, fr) } else { (RHO, simplex[n].1) };
        along(coef, &mut trial);
        let fc = eval(&trial);
        if fc < reference {
            simplex[n] = (trial.clone(), fc);
            continue;
        }
        let best_x = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for k in 0..n {
                x[k] = best_x[k] + SIGMA * (x[k] - best_x[k]);
            }
            *v = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Minimum { x, f, evals: evals.get(), converged }
}

/// Repeated [`minimize`] runs, each restarted around the previous optimum
/// with a shrinking step, until one fails to improve by more than `ftol`.
pub fn minimize_restarting<F>(f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = minimize(&f, x0, cfg);
    let mut step = cfg.step;
    let mut total = best.evals;
    for _ in 0..cfg.max_restarts {
        step *= 0.1;
        let local = NelderMeadConfig { step: step.max(1e-9), ..cfg.clone() };
        let next = minimize(&f, &best.x, &local);
        total += next.evals;
        let improved = next.f < best.f - cfg.ftol * (best.f.abs() + 1e-300);
        let converged = next.converged;
        if next.f <= best.f {
            best = Minimum { converged, ..next };
        }
        if !improved || total >= cfg.max_evals * (cfg.max_restarts + 1) {
            break;
        }
    }
    best.evals = total;
    best
}
