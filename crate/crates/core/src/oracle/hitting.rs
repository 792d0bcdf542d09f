//! Vertex sets meeting every ball of radius `r`, taken from one BFS depth
//! class modulo `r`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSet {
    pub r: u64,
    /// Sorted.
    pub members: Vec<VertexId>,
    /// BFS parent of every vertex; component roots are their own parent.
    pub parent: Vec<VertexId>,
    pub rep: Vec<VertexId>,
    pub rep_dist: Vec<u64>,
}

/// BFS from the smallest vertex of each component. The depth class modulo `r`
/// with the fewest vertices (smallest residue on ties) is selected together
/// with every root. Each vertex is represented by its nearest selected BFS
/// ancestor, which lies at most `r - 1` levels up.
pub fn hitting_set(g: &Graph, r: u64) -> Result<HittingSet> {
    if r < 1 {
        return Err(Error::InvalidParameter("hitting radius must be at least 1".into()));
    }
    if !g.is_unit_weighted() {
        return Err(Error::WeightedInput);
    }
    let n = g.n();
    let mut depth = vec![u64::MAX; n];
    let mut parent = vec![0; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for root in 0..n {
        if depth[root] != u64::MAX {
            continue;
        }
        depth[root] = 0;
        parent[root] = root;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(y, _) in g.neighbors(x) {
                if depth[y] == u64::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
    }

    // depths are below n, so residues >= n + 1 never need counting
    let classes = r.min(n as u64 + 1) as usize;
    let mut count = vec![0usize; classes];
    for &d in &depth {
        count[(d % r) as usize] += 1;
    }
    let chosen = (0..classes).min_by_key(|&c| (count[c], c)).unwrap_or(0) as u64;

    let selected = |v: VertexId| parent[v] == v || depth[v] % r == chosen;
    let mut rep = vec![0; n];
    let mut rep_dist = vec![0; n];
    for &v in &order {
        if selected(v) {
            rep[v] = v;
        } else {
            rep[v] = rep[parent[v]];
            rep_dist[v] = rep_dist[parent[v]] + 1;
        }
    }
    let members = (0..n).filter(|&v| selected(v)).collect();
    Ok(HittingSet { r, members, parent, rep, rep_dist })
}

impl HittingSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    /// Shortest path from `v` up the BFS tree to its representative.
    pub fn rep_path(&self, v: VertexId) -> Path {
        let mut vertices = vec![v];
        let mut x = v;
        while x != self.rep[v] {
            x = self.parent[x];
            vertices.push(x);
        }
        Path { vertices, length: Dist::new(self.rep_dist[v]) }
    }
}
