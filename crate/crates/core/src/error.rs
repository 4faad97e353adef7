use thiserror::Error;

use crate::tree::{Vertex, Weight};

/// Errors raised by tree construction and the algorithms built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge list contains a cycle through edge ({0}, {1})")]
    CycleDetected(Vertex, Vertex),
    #[error("tree is disconnected: vertex {0} is unreachable")]
    Disconnected(Vertex),
    #[error("bad weight interval [{lo}, {hi}]")]
    BadInterval { lo: Weight, hi: Weight },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("vertices must differ (got {0} twice)")]
    SameVertex(Vertex),
    #[error("vertex {1} is not a neighbor of {0}")]
    NotNeighbor(Vertex, Vertex),
    #[error("scenario has {got} weights but the tree has {expected} edges")]
    ScenarioLength { expected: usize, got: usize },
    #[error("weight {weight} on edge {edge} lies outside [{lo}, {hi}]")]
    WeightOutOfInterval {
        edge: usize,
        weight: Weight,
        lo: Weight,
        hi: Weight,
    },
    #[error("connection latency must be nonnegative (got {0})")]
    NegativeRho(Weight),
    #[error("bucket arrays need a positive connection latency")]
    ZeroRho,
    #[error("bucket arrays need at least one key")]
    NoKeys,
    #[error("candidate index {j} out of range 1..={h}")]
    IndexOutOfRange { j: usize, h: usize },
    #[error("extreme tables were built for a different tree")]
    StaleTables,
    #[error("instance too large for brute force ({n} > {limit} vertices)")]
    TooLarge { n: usize, limit: usize },
    #[error("bad weight range [{lo}, {hi}]")]
    BadRange { lo: Weight, hi: Weight },
    #[error("key {key} outside universe 1..={universe}")]
    OutOfUniverse { key: usize, universe: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
