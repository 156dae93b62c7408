//! The averaging dynamic on the social graph.
//!
//! At time `t` only social edges whose endpoints hold amounts within the
//! confidence threshold are *active*. With `m = |E_t|` active edges, every
//! active pair exchanges the fraction `1/m` of their garbage:
//!
//! ```text
//! x_i(t+1) = (1/m) Σ_{j ∈ N_i(t)} x_j(t) + (1 - |N_i(t)|/m) x_i(t)
//! ```
//!
//! and nothing moves when no edge is active. [`step`] evaluates that sum
//! directly; [`transition_matrix`] and [`step_via_laplacian`] are the
//! column-stochastic and `I - L_t/m` forms of the same map, kept as
//! independent cross-checks.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::analysis::lyapunov_z;
use crate::error::{Error, Result};
use crate::graph::{components_of, Graph};
use crate::rng::Stream;

/// Confidence threshold ε. Comparisons are inclusive: `|x_i - x_j| <= ε`
/// activates the edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Finite(f64),
    /// No threshold: every social edge is active at all times.
    Infinite,
}

impl Threshold {
    pub fn finite(epsilon: f64) -> Result<Threshold> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::InvalidThreshold(epsilon));
        }
        if epsilon.is_infinite() {
            return Ok(Threshold::Infinite);
        }
        Ok(Threshold::Finite(epsilon))
    }

    pub fn admits(&self, difference: f64) -> bool {
        match *self {
            Threshold::Finite(eps) => difference.abs() <= eps,
            Threshold::Infinite => true,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Threshold::Finite(eps) => eps,
            Threshold::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Threshold::Infinite)
    }
}

/// Accepts a positive real or `inf`.
impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Threshold> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Threshold::Infinite);
        }
        let eps = s.parse::<f64>().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("invalid threshold {s:?} (expected a positive real or \"inf\")"),
        })?;
        Threshold::finite(eps)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(eps) => write!(f, "{eps}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

/// Garbage amounts `x(t)`, one nonnegative finite entry per agent.
/// `values()[i]` belongs to vertex `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GarbageState {
    values: Vec<f64>,
    time: u64,
}

impl GarbageState {
    pub fn new(values: Vec<f64>) -> Result<GarbageState> {
        GarbageState::at_time(values, 0)
    }

    pub fn at_time(values: Vec<f64>, time: u64) -> Result<GarbageState> {
        for (i, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteGarbage { agent: i + 1, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeGarbage { agent: i + 1, value });
            }
        }
        Ok(GarbageState { values, time })
    }

    /// Independent `uniform(lo, hi)` amount per agent.
    pub fn uniform(n: usize, lo: f64, hi: f64, stream: &mut Stream) -> Result<GarbageState> {
        GarbageState::new((0..n).map(|_| stream.uniform(lo, hi)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Amount held by vertex `v` (1-based).
    pub fn get(&self, v: usize) -> f64 {
        self.values[v - 1]
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_{i,j} |x_i - x_j|`, zero for an empty state.
    pub fn spread(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.max() - self.min()
        }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.values.len() != g.order() {
            return Err(Error::LengthMismatch {
                expected: g.order(),
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

/// The active graph `G_t`: edges of `G` whose endpoints are within ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveTopology {
    edges: Vec<(usize, usize)>,
    neighborhoods: Vec<Vec<usize>>,
}

impl ActiveTopology {
    /// Active edges in canonical order.
    pub fn active_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `|E_t|`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn order(&self) -> usize {
        self.neighborhoods.len()
    }

    /// `N_i(t)` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighborhoods[v - 1]
    }

    /// Connected components of `G_t`.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(self.order(), |v| self.neighbors(v).iter().copied())
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut l = DMatrix::zeros(n, n);
        for &(u, v) in &self.edges {
            l[(u - 1, v - 1)] -= 1.0;
            l[(v - 1, u - 1)] -= 1.0;
            l[(u - 1, u - 1)] += 1.0;
            l[(v - 1, v - 1)] += 1.0;
        }
        l
    }
}

pub fn effective_edges(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<ActiveTopology> {
    s.check(g)?;
    let x = s.values();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| eps.admits(x[u - 1] - x[v - 1]))
        .collect();
    let mut neighborhoods = vec![Vec::new(); g.order()];
    for &(u, v) in &edges {
        neighborhoods[u - 1].push(v);
        neighborhoods[v - 1].push(u);
    }
    for nb in &mut neighborhoods {
        nb.sort_unstable();
    }
    Ok(ActiveTopology {
        edges,
        neighborhoods,
    })
}

/// `A(t)`: `1/m` on active edges, `1 - |N_i|/m` on the diagonal, identity
/// when no edge is active. Column sums are 1.
pub fn transition_matrix(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<DMatrix<f64>> {
    let topology = effective_edges(g, s, eps)?;
    Ok(matrix_of(&topology))
}

pub(crate) fn matrix_of(topology: &ActiveTopology) -> DMatrix<f64> {
    let n = topology.order();
    let mut a = DMatrix::identity(n, n);
    let m = topology.edge_count();
    if m == 0 {
        return a;
    }
    let share = 1.0 / m as f64;
    for &(u, v) in topology.active_edges() {
        a[(u - 1, v - 1)] = share;
        a[(v - 1, u - 1)] = share;
    }
    for i in 1..=n {
        a[(i - 1, i - 1)] = 1.0 - topology.neighbors(i).len() as f64 / m as f64;
    }
    a
}

/// One synchronous update `x(t) -> x(t+1)`.
pub fn step(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<GarbageState> {
    let topology = effective_edges(g, s, eps)?;
    Ok(step_on(&topology, s))
}

/// The update for an already computed active topology.
pub fn step_on(topology: &ActiveTopology, s: &GarbageState) -> GarbageState {
    debug_assert_eq!(topology.order(), s.len());
    let m = topology.edge_count();
    let time = s.time + 1;
    if m == 0 {
        return GarbageState {
            values: s.values.clone(),
            time,
        };
    }
    let m = m as f64;
    let x = &s.values;
    let values = (1..=x.len())
        .map(|i| {
            let nb = topology.neighbors(i);
            let own = x[i - 1];
            let inflow: f64 = nb.iter().map(|&j| x[j - 1]).sum();
            let updated = inflow / m + (1.0 - nb.len() as f64 / m) * own;
            // The exact value is a convex combination of `own` and the
            // neighbors; rounding may overshoot that range by an ulp.
            let (lo, hi) = nb
                .iter()
                .map(|&j| x[j - 1])
                .fold((own, own), |(lo, hi), v| (lo.min(v), hi.max(v)));
            updated.clamp(lo, hi)
        })
        .collect();
    GarbageState { values, time }
}

/// `A(t) x(t)` as a dense matrix-vector product.
pub fn step_via_matrix(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<Vec<f64>> {
    let a = transition_matrix(g, s, eps)?;
    let x = DVector::from_column_slice(s.values());
    Ok((a * x).iter().copied().collect())
}

/// `(I - L_t/|E_t|) x(t)`, or `x(t)` when no edge is active.
pub fn step_via_laplacian(g: &Graph, s: &GarbageState, eps: Threshold) -> Result<Vec<f64>> {
    let topology = effective_edges(g, s, eps)?;
    let x = DVector::from_column_slice(s.values());
    if topology.is_empty() {
        return Ok(s.values().to_vec());
    }
    let l = topology.laplacian();
    let y = &x - (l * &x) / topology.edge_count() as f64;
    Ok(y.iter().copied().collect())
}

/// Per-state diagnostics recorded by [`run`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    /// Lyapunov value; the reduced form when ε is infinite.
    pub z: f64,
    /// `|E_t|`.
    pub active_edges: usize,
    /// `max_{i,j} |x_i(t) - x_j(t)|`.
    pub max_diff: f64,
}

/// States `x(t_0), x(t_0 + 1), ...` with one diagnostics record per state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    threshold: Threshold,
    social_edges: usize,
    states: Vec<GarbageState>,
    diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn states(&self) -> &[GarbageState] {
        &self.states
    }

    pub fn diagnostics(&self) -> &[StepDiagnostics] {
        &self.diagnostics
    }

    pub fn initial(&self) -> &GarbageState {
        &self.states[0]
    }

    pub fn last(&self) -> &GarbageState {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    pub fn last_diagnostics(&self) -> &StepDiagnostics {
        self.diagnostics.last().expect("one record per state")
    }

    /// Number of updates applied.
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    /// `|E|` of the graph the trajectory was run on.
    pub fn social_edges(&self) -> usize {
        self.social_edges
    }

    /// Final spread within `tol` while the active graph is the whole
    /// social graph.
    pub fn settled(&self, tol: f64) -> bool {
        let d = self.last_diagnostics();
        d.max_diff <= tol && d.active_edges == self.social_edges
    }
}

/// Iterates [`step`] from `s0` for at most `max_steps` updates.
///
/// Stops early once the spread is at most `convergence_tol` and every social
/// edge is active. A period-2 swap on a proper subgraph has constant nonzero
/// spread and is therefore never reported as settled.
pub fn run(
    g: &Graph,
    s0: &GarbageState,
    eps: Threshold,
    max_steps: usize,
    convergence_tol: f64,
) -> Result<Trajectory> {
    s0.check(g)?;
    if convergence_tol.is_nan() || convergence_tol <= 0.0 {
        return Err(Error::InvalidTolerance(convergence_tol));
    }
    let mut states = Vec::new();
    let mut diagnostics = Vec::new();
    let mut current = s0.clone();
    loop {
        let topology = effective_edges(g, &current, eps)?;
        let diag = StepDiagnostics {
            z: lyapunov_z(g, &current, eps)?,
            active_edges: topology.edge_count(),
            max_diff: current.spread(),
        };
        let settled = diag.max_diff <= convergence_tol && diag.active_edges == g.edge_count();
        let done = settled || states.len() == max_steps;
        let next = (!done).then(|| step_on(&topology, &current));
        states.push(current);
        diagnostics.push(diag);
        match next {
            Some(s) => current = s,
            None => break,
        }
    }
    Ok(Trajectory {
        threshold: eps,
        social_edges: g.edge_count(),
        states,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn p3() -> Graph {
        generate(GraphKind::Path(3), 0).unwrap()
    }

    fn state(v: &[f64]) -> GarbageState {
        GarbageState::new(v.to_vec()).unwrap()
    }

    fn eps(e: f64) -> Threshold {
        Threshold::finite(e).unwrap()
    }

    #[test]
    fn threshold_parsing() {
        assert_eq!("inf".parse(), Ok(Threshold::Infinite));
        assert_eq!("2.5".parse(), Ok(Threshold::Finite(2.5)));
        assert_eq!("0".parse::<Threshold>(), Err(Error::InvalidThreshold(0.0)));
        assert!("-1".parse::<Threshold>().is_err());
        assert!("abc".parse::<Threshold>().is_err());
        assert_eq!(Threshold::finite(f64::INFINITY), Ok(Threshold::Infinite));
        assert_eq!(Threshold::Infinite.to_string(), "inf");
    }

    #[test]
    fn state_validation() {
        assert_eq!(
            GarbageState::new(vec![0.0, -1.0, 2.0]),
            Err(Error::NegativeGarbage { agent: 2, value: -1.0 })
        );
        assert!(matches!(
            GarbageState::new(vec![f64::NAN]),
            Err(Error::NonFiniteGarbage { agent: 1, .. })
        ));
        assert_eq!(
            effective_edges(&p3(), &state(&[1.0, 2.0]), Threshold::Infinite),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn active_edges_examples() {
        let g = p3();
        let x = state(&[0.0, 3.0, 6.0]);
        let t = effective_edges(&g, &x, eps(10.0)).unwrap();
        assert_eq!(t.active_edges(), &[(1, 2), (2, 3)]);
        assert_eq!(t.edge_count(), 2);

        let t = effective_edges(&g, &x, eps(2.0)).unwrap();
        assert!(t.is_empty());

        let t = effective_edges(&g, &state(&[0.0, 1.0, 5.0]), eps(2.0)).unwrap();
        assert_eq!(t.active_edges(), &[(1, 2)]);
        assert_eq!(t.neighbors(1), &[2]);
        assert_eq!(t.neighbors(3), &[] as &[usize]);
    }

    #[test]
    fn boundary_difference_is_active() {
        let t = effective_edges(&p3(), &state(&[0.0, 3.0, 6.0]), eps(3.0)).unwrap();
        assert_eq!(t.edge_count(), 2);
    }

    #[test]
    fn star_transition_matrix() {
        let g = generate(GraphKind::Star(6), 0).unwrap();
        let a = transition_matrix(&g, &state(&[2.0; 6]), Threshold::Infinite).unwrap();
        assert_eq!(a[(0, 0)], 0.0);
        for k in 1..6 {
            assert_eq!(a[(0, k)], 0.2);
            assert_eq!(a[(k, 0)], 0.2);
            assert!((a[(k, k)] - 0.8).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_active_set_is_identity() {
        let g = p3();
        let x = state(&[0.0, 3.0, 6.0]);
        let a = transition_matrix(&g, &x, eps(2.0)).unwrap();
        assert_eq!(a, DMatrix::identity(3, 3));
        let y = step(&g, &x, eps(2.0)).unwrap();
        assert_eq!(y.values(), x.values());
        assert_eq!(y.time(), 1);
    }

    #[test]
    fn p3_transition_matrix() {
        let a = transition_matrix(&p3(), &state(&[0.0, 3.0, 6.0]), eps(10.0)).unwrap();
        #[rustfmt::skip]
        let expect = DMatrix::from_row_slice(3, 3, &[
            0.5, 0.5, 0.0,
            0.5, 0.0, 0.5,
            0.0, 0.5, 0.5,
        ]);
        assert_eq!(a, expect);
    }

    #[test]
    fn step_examples() {
        let g = p3();
        let y = step(&g, &state(&[0.0, 3.0, 6.0]), eps(10.0)).unwrap();
        assert_eq!(y.values(), &[1.5, 3.0, 4.5]);
        assert_eq!(y.total(), 9.0);

        let y = step(&g, &state(&[0.0, 1.0, 5.0]), eps(2.0)).unwrap();
        assert_eq!(y.values(), &[1.0, 0.0, 5.0]);

        let c = state(&[4.0, 4.0, 4.0]);
        for e in [Threshold::Infinite, eps(0.1)] {
            assert_eq!(step(&g, &c, e).unwrap().values(), c.values());
        }
    }

    #[test]
    fn run_converges_on_c4() {
        let g = generate(GraphKind::Cycle(4), 0).unwrap();
        let traj = run(&g, &state(&[0.0, 1.0, 2.0, 3.0]), Threshold::Infinite, 10_000, 1e-9)
            .unwrap();
        assert!(traj.settled(1e-9));
        assert!(traj.steps() < 10_000);
        for &v in traj.last().values() {
            assert!((v - 1.5).abs() <= 1e-9);
        }
        for (k, s) in traj.states().iter().enumerate() {
            assert_eq!(s.time(), k as u64);
        }
    }

    #[test]
    fn run_zero_steps() {
        let x = state(&[0.0, 3.0, 6.0]);
        let traj = run(&p3(), &x, Threshold::Infinite, 0, 1e-9).unwrap();
        assert_eq!(traj.states(), &[x]);
        assert_eq!(traj.diagnostics().len(), 1);
    }

    #[test]
    fn run_swap_orbit() {
        let traj = run(&p3(), &state(&[0.0, 1.0, 5.0]), eps(2.0), 50, 1e-9).unwrap();
        assert_eq!(traj.steps(), 50);
        for (k, s) in traj.states().iter().enumerate() {
            let expect: &[f64] = if k % 2 == 0 { &[0.0, 1.0, 5.0] } else { &[1.0, 0.0, 5.0] };
            assert_eq!(s.values(), expect);
        }
        assert!(!traj.settled(1e-9));
    }

    #[test]
    fn run_rejects_bad_tolerance() {
        let x = state(&[0.0, 3.0, 6.0]);
        assert_eq!(
            run(&p3(), &x, Threshold::Infinite, 5, 0.0),
            Err(Error::InvalidTolerance(0.0))
        );
    }

    #[test]
    fn run_stops_immediately_when_already_settled() {
        let g = Graph::empty(1).unwrap();
        let traj = run(&g, &state(&[7.0]), Threshold::Infinite, 100, 1e-9).unwrap();
        assert_eq!(traj.steps(), 0);
        assert!(traj.settled(1e-9));
    }
}
