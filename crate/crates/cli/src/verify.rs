//! Randomized property suites.
//!
//! Trial `k` of a run with seed `s` draws everything (graph order, graph,
//! state, threshold, δ) from `Stream::for_trial(s, k)`, so any reported
//! violation can be replayed in isolation from its `(seed, trial)` pair.

use std::fmt;
use std::str::FromStr;

use garbage_game::spectral::MAX_EXACT_ORDER;
use garbage_game::{
    audit_step, cheeger_check, effective_edges, nontrivial_displacement_bound, random_connected,
    step_on, step_via_laplacian, step_via_matrix, transition_matrix,
    whole_graph_displacement_bound, GarbageState, Graph, Stream, Threshold,
};
use serde::Serialize;

use crate::{CliError, Result};

/// Largest order accepted by the dynamics suites.
pub const MAX_DYNAMICS_ORDER: usize = 200;

/// Updates simulated per trial by the multi-step suites.
const STEPS_PER_TRIAL: usize = 200;

/// Edge probability of the random connected graphs.
const EDGE_PROBABILITY: f64 = 0.5;

/// Componentwise agreement demanded of the three step forms.
const EQUIVALENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Conservation,
    Lyapunov,
    Triviality,
    Hull,
    Equivalence,
    Cheeger,
    Displacement,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Conservation,
        Suite::Lyapunov,
        Suite::Triviality,
        Suite::Hull,
        Suite::Equivalence,
        Suite::Cheeger,
        Suite::Displacement,
    ];

    fn size_limits(self) -> (usize, usize) {
        match self {
            Suite::Cheeger => (2, MAX_EXACT_ORDER),
            Suite::Displacement => (2, MAX_DYNAMICS_ORDER),
            _ => (1, MAX_DYNAMICS_ORDER),
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown suite {s:?} (expected one of conservation, lyapunov, triviality, hull, equivalence, cheeger, displacement)"
                ))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Conservation => "conservation",
            Suite::Lyapunov => "lyapunov",
            Suite::Triviality => "triviality",
            Suite::Hull => "hull",
            Suite::Equivalence => "equivalence",
            Suite::Cheeger => "cheeger",
            Suite::Displacement => "displacement",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub trial: u64,
    pub n: usize,
    pub step: Option<u64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
    pub sizes: (usize, usize),
    /// Individual inequality evaluations performed.
    pub checks: u64,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs `trials` randomized instances of `suite` on connected graphs with
/// order drawn uniformly from `sizes`.
pub fn cmd_verify(suite: Suite, trials: u64, seed: u64, sizes: (usize, usize)) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let (lo, hi) = sizes;
    let (min, max) = suite.size_limits();
    if lo > hi {
        return Err(CliError::Usage(format!("empty size range {lo}:{hi}")));
    }
    if lo < min {
        return Err(CliError::Usage(format!(
            "suite {suite} needs graphs of order at least {min}, got {lo}"
        )));
    }
    if hi > max {
        return Err(garbage_game::Error::BudgetExceeded { n: hi, max }.into());
    }
    let mut report = VerifyReport {
        suite,
        seed,
        trials,
        sizes,
        checks: 0,
        violations: Vec::new(),
    };
    for trial in 0..trials {
        let mut stream = Stream::for_trial(seed, trial);
        let n = stream.range_inclusive(lo, hi);
        let g = random_connected(n, EDGE_PROBABILITY, true, &mut stream)?;
        let mut ctx = Trial {
            seed,
            trial,
            n,
            report: &mut report,
        };
        match suite {
            Suite::Conservation | Suite::Lyapunov | Suite::Hull => {
                multi_step(suite, &g, &mut stream, &mut ctx)?
            }
            Suite::Triviality => triviality(&g, &mut stream, &mut ctx)?,
            Suite::Equivalence => equivalence(&g, &mut stream, &mut ctx)?,
            Suite::Cheeger => cheeger(&g, &mut ctx)?,
            Suite::Displacement => displacement(&g, &mut stream, &mut ctx)?,
        }
    }
    Ok(report)
}

struct Trial<'a> {
    seed: u64,
    trial: u64,
    n: usize,
    report: &'a mut VerifyReport,
}

impl Trial<'_> {
    fn check(&mut self, ok: bool, step: Option<u64>, detail: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.violations.push(Violation {
                seed: self.seed,
                trial: self.trial,
                n: self.n,
                step,
                detail: detail(),
            });
        }
    }
}

/// Half the trials run without a threshold, half with ε drawn from (0.5, 10).
fn random_threshold(stream: &mut Stream) -> Threshold {
    if stream.next_f64() < 0.5 {
        Threshold::Infinite
    } else {
        Threshold::Finite(stream.uniform(0.5, 10.0))
    }
}

fn random_state(n: usize, stream: &mut Stream) -> Result<GarbageState> {
    Ok(GarbageState::uniform(n, 0.0, 10.0, stream)?)
}

fn multi_step(suite: Suite, g: &Graph, stream: &mut Stream, ctx: &mut Trial) -> Result<()> {
    let eps = random_threshold(stream);
    let mut state = random_state(g.order(), stream)?;
    for _ in 0..STEPS_PER_TRIAL {
        let t = state.time();
        let (next, audit) = audit_step(g, &state, eps)?;
        match suite {
            Suite::Conservation => ctx.check(
                audit.conservation_error <= audit.conservation_limit,
                Some(t),
                || {
                    format!(
                        "total changed by {:e}, limit {:e}",
                        audit.conservation_error, audit.conservation_limit
                    )
                },
            ),
            Suite::Lyapunov => ctx.check(
                audit.lyapunov.holds(garbage_game::analysis::LYAPUNOV_SLACK),
                Some(t),
                || {
                    format!(
                        "Z decrement {:e} below bound {:e} (eps {eps})",
                        audit.lyapunov.decrement, audit.lyapunov.bound
                    )
                },
            ),
            _ => {
                ctx.check(audit.hull_nested, Some(t), || "hull grew".into());
                ctx.check(audit.nonnegative, Some(t), || "negative garbage".into());
            }
        }
        if next == state || next.spread() == 0.0 {
            break;
        }
        state = next;
    }
    Ok(())
}

fn triviality(g: &Graph, stream: &mut Stream, ctx: &mut Trial) -> Result<()> {
    let eps = random_threshold(stream);
    let mut state = random_state(g.order(), stream)?;
    let delta = stream.uniform(0.0, 1.2 * state.spread()).max(f64::MIN_POSITIVE);
    for _ in 0..STEPS_PER_TRIAL {
        let topology = effective_edges(g, &state, eps)?;
        let next = step_on(&topology, &state);
        if state.spread() <= delta {
            let t = state.time();
            ctx.check(next.spread() <= delta, Some(t), || {
                format!(
                    "{delta}-trivial state became nontrivial (spread {})",
                    next.spread()
                )
            });
        }
        if next == state {
            break;
        }
        state = next;
    }
    Ok(())
}

fn equivalence(g: &Graph, stream: &mut Stream, ctx: &mut Trial) -> Result<()> {
    let eps = random_threshold(stream);
    let state = random_state(g.order(), stream)?;
    let direct = step_on(&effective_edges(g, &state, eps)?, &state);
    let by_matrix = step_via_matrix(g, &state, eps)?;
    let by_laplacian = step_via_laplacian(g, &state, eps)?;
    for (i, ((a, b), c)) in direct
        .values()
        .iter()
        .zip(&by_matrix)
        .zip(&by_laplacian)
        .enumerate()
    {
        let gap = (a - b).abs().max((a - c).abs());
        ctx.check(gap <= EQUIVALENCE_TOL, None, || {
            format!("agent {}: direct {a}, matrix {b}, laplacian {c}", i + 1)
        });
    }
    let matrix = transition_matrix(g, &state, eps)?;
    for (j, column) in matrix.column_iter().enumerate() {
        let sum: f64 = column.iter().sum();
        ctx.check((sum - 1.0).abs() <= EQUIVALENCE_TOL, None, || {
            format!("column {} sums to {sum}", j + 1)
        });
        let in_range = column.iter().all(|&v| (0.0..=1.0).contains(&v));
        ctx.check(in_range, None, || format!("column {} has entries outside [0,1]", j + 1));
    }
    Ok(())
}

fn cheeger(g: &Graph, ctx: &mut Trial) -> Result<()> {
    let r = cheeger_check(g)?;
    ctx.check(r.upper_ok, None, || {
        format!("2 i(G) = {} < lambda2 = {}", 2.0 * r.isoperimetric, r.lambda2)
    });
    ctx.check(r.lower_ok, None, || {
        format!(
            "lambda2 = {} < i^2/(2 Delta) = {}",
            r.lambda2,
            r.isoperimetric.powi(2) / (2.0 * r.max_degree as f64)
        )
    });
    ctx.check(r.floor_ok, None, || {
        format!("lambda2 = {} <= 2/n^3 = {}", r.lambda2, r.lambda2_floor)
    });
    let floor = 2.0 / r.order as f64;
    ctx.check(r.isoperimetric >= floor, None, || {
        format!("i(G) = {} < 2/n = {floor}", r.isoperimetric)
    });
    Ok(())
}

fn displacement(g: &Graph, stream: &mut Stream, ctx: &mut Trial) -> Result<()> {
    let state = random_state(g.order(), stream)?;
    let delta = state.spread() * stream.uniform(0.01, 0.99);

    // No threshold: the active graph is the whole connected graph.
    let topology = effective_edges(g, &state, Threshold::Infinite)?;
    let all: Vec<usize> = (1..=g.order()).collect();
    let b = nontrivial_displacement_bound(&topology, &all, &state, delta)?;
    ctx.check(b.ok, Some(0), || format!("lhs {:e} <= rhs {:e}", b.lhs, b.rhs));

    // A finite threshold may split G_t; every δ-nontrivial component counts.
    let eps = Threshold::Finite(stream.uniform(0.5, 10.0));
    let topology = effective_edges(g, &state, eps)?;
    for component in topology.components() {
        let lo = component.iter().map(|&v| state.get(v)).fold(f64::INFINITY, f64::min);
        let hi = component.iter().map(|&v| state.get(v)).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= delta {
            continue;
        }
        let b = nontrivial_displacement_bound(&topology, &component, &state, delta)?;
        ctx.check(b.ok, Some(0), || {
            format!("component {component:?}: lhs {:e} <= rhs {:e}", b.lhs, b.rhs)
        });
    }
    if let Ok(w) = whole_graph_displacement_bound(g, &state, eps, delta) {
        ctx.check(w.ok, Some(0), || {
            format!("whole graph: lhs {:e} <= rhs {:e}", w.lhs, w.rhs)
        });
    }
    Ok(())
}
