use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("edge ({u}, {v}) has weight {weight}; weights must be at least 1")]
    NonPositiveWeight { u: VertexId, v: VertexId, weight: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("could not sample a connected graph after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("path does not start at {expected} (starts at {found:?})")]
    PathStartMismatch { expected: VertexId, found: Option<VertexId> },

    #[error("path does not end at {expected} (ends at {found:?})")]
    PathEndMismatch { expected: VertexId, found: Option<VertexId> },

    #[error("path hop ({u}, {v}) is not an edge")]
    NonEdgeHop { u: VertexId, v: VertexId },

    #[error("vertex {0} is not a member of the tree")]
    NotInTree(VertexId),

    #[error("padding failed for {} vertices", .0.len())]
    PaddingFailure(Vec<VertexId>),

    #[error("labels belong to different schemes ({0:#x} vs {1:#x})")]
    SchemeMismatch(u64, u64),

    #[error("{u} and {v} are in different components")]
    Unreachable { u: VertexId, v: VertexId },

    #[error("operation requires an unweighted graph")]
    WeightedInput,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("corrupted document: {0}")]
    Corrupted(String),
}
