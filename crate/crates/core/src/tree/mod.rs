//! Tree nim: positions, moves, canonical keys and the memoized solver.
//!
//! Only leaf stacks are playable. A stack reduced to zero is deleted at once,
//! which can expose an inner stack as a new leaf.

mod canon;
mod position;
mod solver;

pub use canon::{canonical_key, CanonicalKey};
pub use position::{Move, TreeJson, TreePosition, VertexId, VertexJson};
pub use solver::TreeSolver;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("edge ({0}, {1}) references an unknown vertex")]
    UnknownEdgeEndpoint(VertexId, VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(VertexId),
    #[error("illegal move on vertex {vertex}: new size {new_size} is not below current size {size}")]
    IllegalSize { vertex: VertexId, new_size: u64, size: u64 },
    #[error("memo table reached its cap of {0} entries")]
    MemoLimit(usize),
    #[error("invalid tree json: {0}")]
    Json(String),
}
