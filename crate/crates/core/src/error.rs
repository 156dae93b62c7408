use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("graph order must be positive")]
    InvalidOrder,

    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("state has length {found}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },

    #[error("negative garbage {value} at agent {agent}")]
    NegativeGarbage { agent: usize, value: f64 },

    #[error("non-finite garbage {value} at agent {agent}")]
    NonFiniteGarbage { agent: usize, value: f64 },

    #[error("threshold must be positive, got {0}")]
    InvalidThreshold(f64),

    #[error("convergence tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("graph needs at least {min} vertices, has {n}")]
    TooSmall { n: usize, min: usize },

    #[error("graph has {n} vertices, exhaustive enumeration is capped at {max}")]
    BudgetExceeded { n: usize, max: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("component is {delta}-trivial (max difference {spread})")]
    TrivialComponent { delta: f64, spread: f64 },

    #[error("vertex set is not a connected component of the active graph")]
    NotComponent,

    #[error("eigenvalue iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
