//! Spectral certificates for the social and active graphs.
//!
//! * `λ₂`, the algebraic connectivity, from the Jacobi solver in [`crate::eigen`].
//! * The isoperimetric number `i(G) = min |∂S| / |S|` over `0 < |S| <= n/2`,
//!   computed exactly by enumerating every vertex subset.
//! * The Cheeger sandwich `2 i(G) >= λ₂ >= i(G)² / (2 Δ(G))` together with the
//!   floor `λ₂ > 2/n³` that holds for every connected graph.
//! * The displacement bound: a step moves a δ-nontrivial component `H` of
//!   the active graph by more than `2δ² / (|V(H)|⁶ |E_t|²)` in squared norm.

use crate::analysis::spread_on;
use crate::dynamics::{effective_edges, step_on, ActiveTopology, GarbageState, Threshold};
use crate::eigen::symmetric_eigenvalues;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by [`isoperimetric_number`].
pub const MAX_EXACT_ORDER: usize = 20;

/// Slack used for the sandwich inequalities.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// Second-smallest Laplacian eigenvalue. Exactly `0.0` for disconnected
/// graphs.
pub fn lambda2(g: &Graph) -> Result<f64> {
    if g.order() < 2 {
        return Err(Error::TooSmall { n: g.order(), min: 2 });
    }
    if !g.is_connected() {
        return Ok(0.0);
    }
    let values = symmetric_eigenvalues(&g.laplacian())?;
    Ok(values[1])
}

/// Exact `i(G)` by exhaustive enumeration of the `2^n` vertex subsets.
/// Crossing edges are counted once each.
pub fn isoperimetric_number(g: &Graph) -> Result<f64> {
    let n = g.order();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    if n > MAX_EXACT_ORDER {
        return Err(Error::BudgetExceeded {
            n,
            max: MAX_EXACT_ORDER,
        });
    }
    let adjacency: Vec<u32> = (1..=n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << (w - 1)))
        .collect();
    let half = n / 2;
    let full: u32 = (1u32 << n) - 1;

    // best ratio kept as a fraction (boundary, size) to compare exactly
    let mut best = (u32::MAX, 1u32);
    for subset in 1..=full {
        let size = subset.count_ones();
        if size as usize > half {
            continue;
        }
        let outside = !subset & full;
        let mut boundary = 0;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            boundary += (adjacency[v] & outside).count_ones();
            rest &= rest - 1;
        }
        if (boundary as u64) * (best.1 as u64) < (best.0 as u64) * (size as u64) {
            best = (boundary, size);
        }
    }
    Ok(best.0 as f64 / best.1 as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralReport {
    pub order: usize,
    pub lambda2: f64,
    pub isoperimetric: f64,
    pub max_degree: usize,
    /// `2/n³`.
    pub lambda2_floor: f64,
    /// `2 i(G) >= λ₂`.
    pub upper_ok: bool,
    /// `λ₂ >= i(G)² / (2 Δ(G))`.
    pub lower_ok: bool,
    /// `λ₂ > 2/n³`.
    pub floor_ok: bool,
    /// Both sides of the Cheeger sandwich hold.
    pub sandwich_ok: bool,
}

impl SpectralReport {
    pub fn all_ok(&self) -> bool {
        self.sandwich_ok && self.floor_ok
    }
}

pub fn cheeger_check(g: &Graph) -> Result<SpectralReport> {
    let n = g.order();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    if n > MAX_EXACT_ORDER {
        return Err(Error::BudgetExceeded {
            n,
            max: MAX_EXACT_ORDER,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let lambda2 = lambda2(g)?;
    let isoperimetric = isoperimetric_number(g)?;
    let max_degree = g.max_degree();
    let lambda2_floor = 2.0 / (n as f64).powi(3);
    let upper_ok = 2.0 * isoperimetric >= lambda2 - SANDWICH_SLACK;
    let lower_ok =
        lambda2 >= isoperimetric * isoperimetric / (2.0 * max_degree as f64) - SANDWICH_SLACK;
    Ok(SpectralReport {
        order: n,
        lambda2,
        isoperimetric,
        max_degree,
        lambda2_floor,
        upper_ok,
        lower_ok,
        floor_ok: lambda2 > lambda2_floor,
        sandwich_ok: upper_ok && lower_ok,
    })
}

/// Both sides of a displacement inequality `lhs > rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Squared displacement of the component `component` of the active graph
/// under one full-graph step, against `2δ² / (|V(H)|⁶ |E_t|²)`.
///
/// `component` must be exactly one connected component of `topology`
/// (1-based vertices, any order) and must not be δ-trivial.
pub fn nontrivial_displacement_bound(
    topology: &ActiveTopology,
    component: &[usize],
    s: &GarbageState,
    delta: f64,
) -> Result<DisplacementBound> {
    if s.len() != topology.order() {
        return Err(Error::LengthMismatch {
            expected: topology.order(),
            found: s.len(),
        });
    }
    let mut members = component.to_vec();
    members.sort_unstable();
    if members.is_empty() || !topology.components().contains(&members) {
        return Err(Error::NotComponent);
    }
    let spread = spread_on(s, &members);
    if spread <= delta {
        return Err(Error::TrivialComponent { delta, spread });
    }
    let next = step_on(topology, s);
    let lhs = members
        .iter()
        .map(|&v| (s.get(v) - next.get(v)).powi(2))
        .sum::<f64>();
    let size = members.len() as f64;
    let m = topology.edge_count() as f64;
    let rhs = 2.0 * delta * delta / (size.powi(6) * m * m);
    Ok(DisplacementBound {
        lhs,
        rhs,
        ok: lhs > rhs,
    })
}

/// Whole-state form: if some component of `G_t` is δ-nontrivial then the
/// squared displacement over all agents exceeds `2δ² / (n⁶ |E|²)`, with
/// `|E|` the social edge count.
pub fn whole_graph_displacement_bound(
    g: &Graph,
    s: &GarbageState,
    eps: Threshold,
    delta: f64,
) -> Result<DisplacementBound> {
    let topology = effective_edges(g, s, eps)?;
    let widest = topology
        .components()
        .iter()
        .map(|c| spread_on(s, c))
        .fold(0.0, f64::max);
    if widest <= delta {
        return Err(Error::TrivialComponent {
            delta,
            spread: widest,
        });
    }
    let next = step_on(&topology, s);
    let lhs = s
        .values()
        .iter()
        .zip(next.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>();
    let n = g.order() as f64;
    let m = g.edge_count() as f64;
    let rhs = 2.0 * delta * delta / (n.powi(6) * m * m);
    Ok(DisplacementBound {
        lhs,
        rhs,
        ok: lhs > rhs,
    })
}
