use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// A walk in the graph together with its total weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<VertexId>,
    pub length: Dist,
}

impl Path {
    pub fn single(v: VertexId) -> Self {
        Path { vertices: vec![v], length: Dist::ZERO }
    }

    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn first(&self) -> Option<VertexId> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<VertexId> {
        self.vertices.last().copied()
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, other: &Path) {
        debug_assert_eq!(self.last(), other.first());
        self.vertices.extend_from_slice(&other.vertices[1..]);
        self.length = self.length + other.length;
    }
}

/// Checks that `path` walks from `u` to `v` along edges of `g` and returns its
/// total weight.
pub fn validate_path(g: &Graph, path: &[VertexId], u: VertexId, v: VertexId) -> Result<Dist> {
    match path.first() {
        Some(&x) if x == u => {}
        found => return Err(Error::PathStartMismatch { expected: u, found: found.copied() }),
    }
    match path.last() {
        Some(&x) if x == v => {}
        found => return Err(Error::PathEndMismatch { expected: v, found: found.copied() }),
    }
    let mut total = 0u64;
    for hop in path.windows(2) {
        let (a, b) = (hop[0], hop[1]);
        if a >= g.n() || b >= g.n() {
            return Err(Error::NonEdgeHop { u: a, v: b });
        }
        let w = g.weight(a, b).ok_or(Error::NonEdgeHop { u: a, v: b })?;
        total += w;
    }
    Ok(Dist::new(total))
}
