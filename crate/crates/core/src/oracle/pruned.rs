//! Cluster trees pruned to separator, hitting-set and root vertices, with
//! skeleton paths between kept vertices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::oracle::separator::tree_separator;
use crate::spt::ShortestPathTree;

/// A tree restricted to a subset of its vertices. Every kept vertex points to
/// its nearest kept proper ancestor, with the tree distance to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunedTree {
    root: VertexId,
    members: Vec<VertexId>,
    /// Position of the nearest kept ancestor; the root points to itself.
    ancestor: Vec<u32>,
    gap: Vec<u64>,
    dist: Vec<u64>,
}

/// Keeps the root, the separator of `tree` for size `p`, and every vertex
/// accepted by `in_hitting_set`.
pub fn prune_tree<F: Fn(VertexId) -> bool>(tree: &ShortestPathTree, in_hitting_set: F, p: u64) -> PrunedTree {
    let len = tree.len();
    let mut kept = vec![false; len];
    for v in tree_separator(tree, p) {
        kept[tree.position(v).unwrap()] = true;
    }
    let root_pos = tree.position(tree.root()).expect("root is a member");
    kept[root_pos] = true;
    for (pos, k) in kept.iter_mut().enumerate() {
        *k |= in_hitting_set(tree.vertex_at(pos));
    }

    let mut order: Vec<usize> = (0..len).collect();
    order.sort_unstable_by_key(|&i| tree.dist_at(i));
    // nearest kept ancestor of every position, parents first
    let mut near = vec![root_pos; len];
    for &pos in &order {
        if pos != root_pos {
            let par = tree.parent_pos(pos);
            near[pos] = if kept[par] { par } else { near[par] };
        }
    }

    // members are sorted because tree positions follow vertex order
    let mut new_pos = vec![u32::MAX; len];
    let mut members = Vec::new();
    for pos in (0..len).filter(|&i| kept[i]) {
        new_pos[pos] = members.len() as u32;
        members.push(tree.vertex_at(pos));
    }
    let mut ancestor = Vec::with_capacity(members.len());
    let mut gap = Vec::with_capacity(members.len());
    let mut dist = Vec::with_capacity(members.len());
    for pos in (0..len).filter(|&i| kept[i]) {
        ancestor.push(new_pos[near[pos]]);
        gap.push(tree.dist_at(pos) - tree.dist_at(near[pos]));
        dist.push(tree.dist_at(pos));
    }
    PrunedTree { root: tree.root(), members, ancestor, gap, dist }
}

impl PrunedTree {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    fn position(&self, v: VertexId) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.position(v).is_some()
    }

    /// Nearest kept ancestor and the distance to it.
    pub fn ancestor(&self, v: VertexId) -> Option<(VertexId, u64)> {
        self.position(v).map(|i| (self.members[self.ancestor[i] as usize], self.gap[i]))
    }

    pub fn dist_to_root(&self, v: VertexId) -> Option<u64> {
        self.position(v).map(|i| self.dist[i])
    }

    pub fn max_gap(&self) -> u64 {
        self.gap.iter().copied().max().unwrap_or(0)
    }

    /// Kept vertices from `a` up to the lowest kept common ancestor and down
    /// to `b`, each with its tree distance from `a` along the sequence.
    pub fn skeleton(&self, a: VertexId, b: VertexId) -> Result<Vec<(VertexId, u64)>> {
        let mut pa = self.position(a).ok_or(Error::NotInTree(a))?;
        let mut pb = self.position(b).ok_or(Error::NotInTree(b))?;
        let mut up = Vec::new();
        let mut down = Vec::new();
        while pa != pb {
            if self.dist[pa] >= self.dist[pb] {
                up.push(pa);
                pa = self.ancestor[pa] as usize;
            } else {
                down.push(pb);
                pb = self.ancestor[pb] as usize;
            }
        }
        let mut seq = Vec::with_capacity(up.len() + down.len() + 1);
        let mut cum = 0;
        for &i in &up {
            seq.push((self.members[i], cum));
            cum += self.gap[i];
        }
        seq.push((self.members[pa], cum));
        for &i in down.iter().rev() {
            cum += self.gap[i];
            seq.push((self.members[i], cum));
        }
        Ok(seq)
    }

    pub fn validate(&self) -> Result<()> {
        let len = self.members.len();
        let bad = |what: &str| Err(Error::Corrupted(format!("pruned tree {}: {what}", self.root)));
        if self.ancestor.len() != len || self.gap.len() != len || self.dist.len() != len {
            return bad("column lengths differ");
        }
        if self.members.windows(2).any(|w| w[0] >= w[1]) {
            return bad("members not sorted");
        }
        let Some(r) = self.position(self.root) else { return bad("root missing") };
        for i in 0..len {
            let a = self.ancestor[i] as usize;
            if a >= len {
                return bad("ancestor out of range");
            }
            let ok = if i == r {
                a == i && self.dist[i] == 0 && self.gap[i] == 0
            } else {
                self.dist[a] < self.dist[i] && self.dist[a] + self.gap[i] == self.dist[i]
            };
            if !ok {
                return bad("inconsistent ancestor record");
            }
        }
        Ok(())
    }
}

/// Greedy thinning of a skeleton with cumulative distances: keeps the first
/// element, every element at least `p` past the last kept one, and the last.
pub fn sparsify_skeleton(seq: &[(VertexId, u64)], p: u64) -> Vec<(VertexId, u64)> {
    let Some((&first, rest)) = seq.split_first() else { return Vec::new() };
    let mut kept = vec![first];
    for (j, &x) in rest.iter().enumerate() {
        if j + 1 == rest.len() || x.1 - kept.last().unwrap().1 >= p {
            kept.push(x);
        }
    }
    kept
}
