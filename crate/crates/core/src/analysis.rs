//! Lyapunov bookkeeping and convergence reporting.
//!
//! For a finite threshold the potential is
//!
//! ```text
//! Z_t = Σ_{i ≠ j} [ε² ∧ (x_i - x_j)²] ∨ ε² 1{(i,j) ∉ E}
//! ```
//!
//! over ordered pairs: social edges contribute their squared difference
//! capped at ε², non-edges contribute the constant ε². The diagonal is left
//! out; it would only add the constant `n ε²`.
//!
//! With ε infinite the non-edge terms are unbounded, so the reduced form
//! `Σ_{(i,j) ∈ E, ordered} (x_i - x_j)²` is used instead. Both forms satisfy
//!
//! ```text
//! Z_t - Z_{t+1} >= 4 Σ_i (|E_t| - |N_i(t)|) (x_i(t) - x_i(t+1))²
//! ```

use crate::dynamics::{effective_edges, step_on, GarbageState, Threshold, Trajectory};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// `Z_t`, one Lyapunov evaluation and its certified decrease.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovRecord {
    pub z: f64,
    /// `Z_t - Z_{t+1}`.
    pub decrement: f64,
    /// `4 Σ_i (|E_t| - |N_i|) (x_i(t) - x_i(t+1))²`.
    pub bound: f64,
}

impl LyapunovRecord {
    pub fn holds(&self, slack: f64) -> bool {
        self.decrement >= self.bound - slack
    }
}

pub fn lyapunov_z(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<f64> {
    if s.len() != g.order() {
        return Err(Error::LengthMismatch {
            expected: g.order(),
            found: s.len(),
        });
    }
    let x = s.values();
    let squared = |u: usize, v: usize| {
        let d = x[u - 1] - x[v - 1];
        d * d
    };
    let z = match eps {
        Threshold::Infinite => {
            2.0 * g.edges().iter().map(|&(u, v)| squared(u, v)).sum::<f64>()
        }
        Threshold::Finite(e) => {
            let cap = e * e;
            let n = g.order();
            let non_edges = n * (n - 1) - 2 * g.edge_count();
            let edge_part: f64 = g.edges().iter().map(|&(u, v)| squared(u, v).min(cap)).sum();
            2.0 * edge_part + non_edges as f64 * cap
        }
    };
    Ok(z)
}

pub fn decrement_lower_bound(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<f64> {
    let topology = effective_edges(g, s, eps)?;
    let next = step_on(&topology, s);
    Ok(bound_for(&topology, s, &next))
}

fn bound_for(
    topology: &crate::dynamics::ActiveTopology,
    s: &GarbageState,
    next: &GarbageState,
) -> f64 {
    let m = topology.edge_count();
    if m == 0 {
        return 0.0;
    }
    let total: f64 = s
        .values()
        .iter()
        .zip(next.values())
        .enumerate()
        .map(|(i, (a, b))| {
            let slack = (m - topology.neighbors(i + 1).len()) as f64;
            slack * (a - b) * (a - b)
        })
        .sum();
    4.0 * total
}

/// Evaluates `Z_t`, steps once, and pairs the measured decrement with its
/// lower bound.
pub fn lyapunov_record(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<LyapunovRecord> {
    Ok(audit_step(g, s, eps)?.1.lyapunov)
}

/// δ-triviality of the values on `vertices` (1-based): every pair differs by
/// at most `delta`. "Distance" here is the difference of garbage amounts.
pub fn is_trivial(s: &GarbageState, vertices: &[usize], delta: f64) -> Result<bool> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    Ok(spread_on(s, vertices) <= delta)
}

pub(crate) fn spread_on(s: &GarbageState, vertices: &[usize]) -> f64 {
    let (lo, hi) = vertices
        .iter()
        .map(|&v| s.get(v))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// Convex hull of the amounts, i.e. `(min, max)`.
pub fn hull_bounds(s: &GarbageState) -> (f64, f64) {
    (s.min(), s.max())
}

/// Summary of a run measured against convergence to the initial average.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    /// Mean of the final state.
    pub limit_estimate: f64,
    pub initial_average: f64,
    pub max_deviation_from_average: f64,
    /// First state index at which the whole graph is ε-trivial.
    pub trivialization_time: Option<usize>,
    pub steps_run: usize,
    /// `max_t |Σ x(t) - Σ x(0)|`.
    pub conservation_error: f64,
    /// Connected, not a star, and ε-trivial at some recorded time.
    pub hypothesis_holds: bool,
}

pub fn convergence_report(traj: &Trajectory, g: &Graph, tol: f64) -> Result<ConvergenceReport> {
    let states = traj.states();
    let first = states.first().ok_or(Error::EmptyTrajectory)?;
    if first.len() != g.order() {
        return Err(Error::LengthMismatch {
            expected: g.order(),
            found: first.len(),
        });
    }
    let eps = traj.threshold();
    let initial_average = first.mean();
    let initial_total = first.total();
    let last = traj.last();
    let trivialization_time = match eps {
        Threshold::Infinite => Some(0),
        Threshold::Finite(e) => states.iter().position(|s| s.spread() <= e),
    };
    let conservation_error = states
        .iter()
        .map(|s| (s.total() - initial_total).abs())
        .fold(0.0, f64::max);
    let max_deviation_from_average = last
        .values()
        .iter()
        .map(|v| (v - initial_average).abs())
        .fold(0.0, f64::max);
    let final_edges = effective_edges(g, last, eps)?.edge_count();
    Ok(ConvergenceReport {
        converged: last.spread() <= tol && final_edges == g.edge_count(),
        limit_estimate: last.mean(),
        initial_average,
        max_deviation_from_average,
        trivialization_time,
        steps_run: traj.steps(),
        conservation_error,
        hypothesis_holds: g.is_connected() && !g.is_star() && trivialization_time.is_some(),
    })
}

/// Per-step invariant checks for one update `x(t) -> x(t+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepAudit {
    /// `|Σ x(t+1) - Σ x(t)|`.
    pub conservation_error: f64,
    /// `1e-12 · n · max_i x_i(t)`.
    pub conservation_limit: f64,
    pub nonnegative: bool,
    /// `[min, max]` of `x(t+1)` lies inside that of `x(t)`.
    pub hull_nested: bool,
    pub lyapunov: LyapunovRecord,
}

/// Slack applied to the Lyapunov decrement inequality.
pub const LYAPUNOV_SLACK: f64 = 1e-9;

impl StepAudit {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.conservation_error > self.conservation_limit {
            out.push(format!(
                "total changed by {:e} (limit {:e})",
                self.conservation_error, self.conservation_limit
            ));
        }
        if !self.nonnegative {
            out.push("negative garbage after step".into());
        }
        if !self.hull_nested {
            out.push("hull grew".into());
        }
        if !self.lyapunov.holds(LYAPUNOV_SLACK) {
            out.push(format!(
                "Z decreased by {:e}, bound {:e}",
                self.lyapunov.decrement, self.lyapunov.bound
            ));
        }
        out
    }
}

/// Steps once from `s` and audits the update.
pub fn audit_step(
    g: &Graph,
    s: &GarbageState,
    eps: Threshold,
) -> Result<(GarbageState, StepAudit)> {
    let topology = effective_edges(g, s, eps)?;
    let next = step_on(&topology, s);
    let z = lyapunov_z(g, s, eps)?;
    let z_next = lyapunov_z(g, &next, eps)?;
    let (lo, hi) = hull_bounds(s);
    let (lo_next, hi_next) = hull_bounds(&next);
    let audit = StepAudit {
        conservation_error: (next.total() - s.total()).abs(),
        conservation_limit: 1e-12 * s.len() as f64 * s.max(),
        nonnegative: next.values().iter().all(|&v| v >= 0.0),
        hull_nested: lo_next >= lo && hi_next <= hi,
        lyapunov: LyapunovRecord {
            z,
            decrement: z - z_next,
            bound: bound_for(&topology, s, &next),
        },
    };
    Ok((next, audit))
}

/// Audits every consecutive pair of a trajectory. Returns `(t, message)`
/// for each violated invariant, including states that do not follow from
/// their predecessor.
pub fn audit_trajectory(g: &Graph, traj: &Trajectory) -> Result<Vec<(u64, String)>> {
    let eps = traj.threshold();
    let mut out = Vec::new();
    for pair in traj.states().windows(2) {
        let (expected, audit) = audit_step(g, &pair[0], eps)?;
        let t = pair[0].time();
        if expected != pair[1] {
            out.push((t, "recorded successor differs from the update".to_string()));
        }
        out.extend(audit.violations().into_iter().map(|m| (t, m)));
    }
    Ok(out)
}
