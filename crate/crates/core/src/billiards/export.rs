use serde_json::{json, Value};

use super::ClosedBilliardTrajectory;
use crate::bodies::ConvexBody;

pub fn trajectory_csv_header(n: usize) -> String {
    let mut cols = vec!["m".to_string(), "j".to_string()];
    cols.extend((0..n).map(|i| format!("q{i}")));
    cols.extend((0..n).map(|i| format!("p{i}")));
    cols.push("segment_length".into());
    cols.join(",")
}

/// One row per bounce; `segment_length` is `h_T(q_{j+1} - q_j)`.
pub fn trajectory_csv(traj: &ClosedBilliardTrajectory, t: &ConvexBody) -> String {
    let n = t.dim();
    let m = traj.bounces();
    let mut out = trajectory_csv_header(n);
    out.push('\n');
    for j in 0..m {
        let q = &traj.bounce_points[j];
        let seg = if m >= 2 { t.h(&(&traj.bounce_points[(j + 1) % m] - q)) } else { 0.0 };
        let mut cells = vec![m.to_string(), j.to_string()];
        cells.extend(q.iter().map(|x| format!("{x:.17e}")));
        cells.extend(traj.momenta[j].iter().map(|x| format!("{x:.17e}")));
        cells.push(format!("{seg:.17e}"));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn summary_json(traj: &ClosedBilliardTrajectory, closure_residual: Option<f64>) -> Value {
    json!({
        "length": traj.length,
        "kind": traj.kind,
        "bounces": traj.bounces(),
        "closed": traj.closed,
        "closure_residual": closure_residual.filter(|r| r.is_finite()),
    })
}
