use crate::graph::{Edge, Vertex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: u32 },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("graphs have different vertex counts ({left} vs {right})")]
    VertexCountMismatch { left: u32, right: u32 },
    #[error("requested {requested} double edges but backbone has only {available} edges")]
    TooManyDoubles { requested: usize, available: usize },
    #[error("edge {0:?} must be present")]
    EdgeMissing(Edge),
    #[error("edge {0:?} must be absent")]
    EdgePresent(Edge),
    #[error("transition changes the undirected backbone")]
    BackboneChanged,
    #[error("relaxation {0} outside [0, 1]")]
    InvalidRelaxation(f64),
    #[error("move mix must be nonnegative and sum to 1")]
    InvalidMoveMix,
    #[error("maximum simplex table limited to cliques of size {max}, requested {requested}")]
    TableTooLarge { requested: usize, max: usize },
    #[error("override for dimension {dim} lies below the target upper bound")]
    InvalidOverride { dim: usize },
    #[error("sampling distance needs at least 2 edges, got {0}")]
    TooFewEdges(u64),
    #[error("sampling distance must be at least 1")]
    ZeroSamplingDistance,
    #[error("incremental counts diverged from a full recount at step {step}")]
    CountDrift { step: u64 },
    #[error("start graph counts lie outside the relaxed bounds in dimension {0}")]
    StartOutsideBounds(usize),
    #[error("chain of length {len} too short, need {needed}")]
    ChainTooShort { len: usize, needed: usize },
    #[error("graph is not oriented: double edge {0:?}")]
    NotOriented(Edge),
    #[error("graph is not a tournament: pair {0:?} unconnected")]
    NotATournament(Edge),
    #[error("backbone has {0} edges, state enumeration supports at most 16")]
    BackboneTooLarge(usize),
    #[error("{n_edges} directed edges infeasible for a backbone with {m} edges")]
    InfeasibleEdgeCount { n_edges: usize, m: usize },
    #[error("state space of {0} states too large for a dense matrix")]
    StateSpaceTooLarge(usize),
    #[error("state not in the enumerated space")]
    UnknownState,
    #[error("sample of {got} draws too small, need at least {needed}")]
    UndersizedSample { got: u64, needed: u64 },
}

pub type Result<T> = core::result::Result<T, Error>;
