//! Simulation and certification of the threshold-constrained garbage
//! disposal game.
//!
//! `n` agents sit on an undirected social graph. Each holds a nonnegative
//! amount of garbage; at every step the social neighbors whose amounts differ
//! by at most a confidence threshold ε dump the same fraction `1/|E_t|` of
//! their garbage onto each other. Total garbage is conserved, the range of
//! amounts never grows, and on a connected graph that is not a star the
//! amounts converge to the initial average once the threshold stops
//! binding.
//!
//! The crate is organised as:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | social graph, edge-list parsing, generators, Laplacian |
//! | [`dynamics`] | threshold, state, active topology, the update and runs |
//! | [`analysis`] | Lyapunov potential, decrement bound, triviality, reports |
//! | [`spectral`] | `λ₂`, exact isoperimetric number, Cheeger sandwich, displacement bound |
//! | [`eigen`] | cyclic Jacobi eigenvalue solver for symmetric matrices |
//! | [`rng`] | splitmix64-seeded xoshiro256** streams |
//!
//! ```
//! use garbage_game::{generate, run, GarbageState, GraphKind, Threshold};
//!
//! let g = generate(GraphKind::Cycle(4), 0).unwrap();
//! let x0 = GarbageState::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
//! let traj = run(&g, &x0, Threshold::Infinite, 10_000, 1e-9).unwrap();
//! assert!(traj.last().values().iter().all(|v| (v - 1.5).abs() < 1e-9));
//! ```

pub mod analysis;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod rng;
pub mod spectral;

pub use analysis::{
    audit_step, audit_trajectory, convergence_report, decrement_lower_bound, hull_bounds,
    is_trivial, lyapunov_record, lyapunov_z, ConvergenceReport, LyapunovRecord, StepAudit,
};
pub use dynamics::{
    effective_edges, run, step, step_on, step_via_laplacian, step_via_matrix, transition_matrix,
    ActiveTopology, GarbageState, StepDiagnostics, Threshold, Trajectory,
};
pub use error::{Error, Result};
pub use graph::{generate, parse_edge_list, random_connected, Graph, GraphKind};
pub use rng::Stream;
pub use spectral::{
    cheeger_check, isoperimetric_number, lambda2, nontrivial_displacement_bound,
    whole_graph_displacement_bound, DisplacementBound, SpectralReport,
};

// Compile the guide's snippets as doctests so the book cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/lyapunov.md")]
    mod lyapunov {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
