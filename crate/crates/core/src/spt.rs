use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::path::Path;

pub type TreeId = u32;

/// Shortest-path tree over a vertex subset. Members are stored sorted; parents
/// are kept as positions so walking to the root never touches the hash index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct ShortestPathTree {
    id: TreeId,
    root: VertexId,
    members: Vec<VertexId>,
    parent: Vec<u32>,
    dist: Vec<u64>,
    index: HashMap<VertexId, u32>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    id: TreeId,
    root: VertexId,
    members: Vec<MemberRepr>,
}

#[derive(Serialize, Deserialize)]
struct MemberRepr {
    v: VertexId,
    parent: VertexId,
    dist: u64,
}

impl TryFrom<TreeRepr> for ShortestPathTree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<Self> {
        let records = r.members.into_iter().map(|m| (m.v, m.parent, m.dist)).collect();
        ShortestPathTree::from_records(r.id, r.root, records)
    }
}

impl From<ShortestPathTree> for TreeRepr {
    fn from(t: ShortestPathTree) -> Self {
        let members = t.records().map(|(v, parent, dist)| MemberRepr { v, parent, dist: dist.value() }).collect();
        TreeRepr { id: t.id, root: t.root, members }
    }
}

impl ShortestPathTree {
    /// Builds a tree from `(vertex, parent, dist_to_root)` records. The root
    /// must be its own parent at distance 0; every other parent must be a member
    /// strictly closer to the root.
    pub fn from_records(id: TreeId, root: VertexId, mut records: Vec<(VertexId, VertexId, u64)>) -> Result<Self> {
        records.sort_unstable_by_key(|r| r.0);
        let members: Vec<VertexId> = records.iter().map(|r| r.0).collect();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Corrupted(format!("tree {id} lists a vertex twice")));
        }
        let index: HashMap<VertexId, u32> = members.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut parent = Vec::with_capacity(records.len());
        let mut dist = Vec::with_capacity(records.len());
        for &(v, p, d) in &records {
            let pos = *index
                .get(&p)
                .ok_or_else(|| Error::Corrupted(format!("tree {id}: parent {p} of {v} is not a member")))?;
            parent.push(pos);
            dist.push(d);
        }
        let tree = ShortestPathTree { id, root, members, parent, dist, index };
        let root_pos = tree.position(root).ok_or_else(|| Error::Corrupted(format!("tree {id}: root {root} missing")))?;
        if tree.parent[root_pos] as usize != root_pos || tree.dist[root_pos] != 0 {
            return Err(Error::Corrupted(format!("tree {id}: malformed root record")));
        }
        for i in 0..tree.len() {
            if i != root_pos && tree.dist[tree.parent[i] as usize] >= tree.dist[i] {
                return Err(Error::Corrupted(format!("tree {id}: parent of {} is not closer to the root", tree.members[i])));
            }
        }
        Ok(tree)
    }

    pub fn id(&self) -> TreeId {
        self.id
    }

    pub(crate) fn set_id(&mut self, id: TreeId) {
        self.id = id;
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Sorted member list.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).map(|&p| p as usize)
    }

    pub fn parent_of(&self, v: VertexId) -> Option<VertexId> {
        self.position(v).map(|p| self.members[self.parent[p] as usize])
    }

    pub fn dist_to_root(&self, v: VertexId) -> Option<Dist> {
        self.position(v).map(|p| Dist::new(self.dist[p]))
    }

    /// `(vertex, parent, dist_to_root)` in vertex order.
    pub fn records(&self) -> impl Iterator<Item = (VertexId, VertexId, Dist)> + '_ {
        (0..self.len()).map(|i| (self.members[i], self.members[self.parent[i] as usize], Dist::new(self.dist[i])))
    }

    /// Largest root distance, i.e. the eccentricity of the root inside the tree.
    pub fn depth(&self) -> Dist {
        Dist::new(self.dist.iter().copied().max().unwrap_or(0))
    }

    /// Child positions per member position, each list in ascending vertex order.
    pub fn children(&self) -> Vec<Vec<u32>> {
        let mut children = vec![Vec::new(); self.len()];
        let root_pos = self.index[&self.root] as usize;
        for i in 0..self.len() {
            if i != root_pos {
                children[self.parent[i] as usize].push(i as u32);
            }
        }
        children
    }

    pub(crate) fn parent_pos(&self, pos: usize) -> usize {
        self.parent[pos] as usize
    }

    pub(crate) fn dist_at(&self, pos: usize) -> u64 {
        self.dist[pos]
    }

    pub(crate) fn vertex_at(&self, pos: usize) -> VertexId {
        self.members[pos]
    }

    /// The unique tree path `u -> lca -> v`. Both endpoints climb towards the
    /// root, always moving the one with the larger remaining root distance, so
    /// they meet at the lowest common ancestor.
    pub fn tree_path(&self, u: VertexId, v: VertexId) -> Result<Path> {
        let mut pu = self.position(u).ok_or(Error::NotInTree(u))?;
        let mut pv = self.position(v).ok_or(Error::NotInTree(v))?;
        let mut up = Vec::new();
        let mut down = Vec::new();
        while pu != pv {
            if self.dist[pu] >= self.dist[pv] {
                up.push(self.members[pu]);
                pu = self.parent[pu] as usize;
            } else {
                down.push(self.members[pv]);
                pv = self.parent[pv] as usize;
            }
        }
        let lca = pu;
        let length = self.dist[self.index[&u] as usize] + self.dist[self.index[&v] as usize] - 2 * self.dist[lca];
        up.push(self.members[lca]);
        up.extend(down.into_iter().rev());
        Ok(Path { vertices: up, length: Dist::new(length) })
    }

    /// Checks the tree against `g`: parents are adjacent with matching weights
    /// and every root distance is a true shortest distance inside the member
    /// set. Intended for tests and verification passes.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        for (v, p, d) in self.records() {
            if v == self.root {
                continue;
            }
            let w = g.weight(v, p).ok_or(Error::NonEdgeHop { u: v, v: p })?;
            if self.dist_to_root(p).unwrap() + w != d {
                return Err(Error::Corrupted(format!("tree {}: distance of {v} is not parent + weight", self.id)));
            }
        }
        let exact = crate::sssp::shortest_path_tree(g, self.root, Some(&self.members))?;
        for (v, _, d) in self.records() {
            if exact.dist_to_root(v) != Some(d) {
                return Err(Error::Corrupted(format!("tree {}: {v} is not at shortest distance", self.id)));
            }
        }
        Ok(())
    }
}
