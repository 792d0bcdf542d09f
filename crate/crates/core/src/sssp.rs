//! Shortest-path primitives: truncated multi-source Dijkstra, balls, exact
//! distances and shortest-path trees.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::radius::Radius;
use crate::spt::{ShortestPathTree, TreeId};

const UNREACHED: u64 = u64::MAX;

/// Reusable Dijkstra state. Only touched entries are reset, so a single space
/// can serve many small searches on a large graph.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    dist: Vec<u64>,
    reached: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(u64, VertexId)>>,
}

impl SearchSpace {
    pub fn new(n: usize) -> Self {
        SearchSpace { dist: vec![UNREACHED; n], reached: Vec::new(), heap: BinaryHeap::new() }
    }

    pub fn clear(&mut self) {
        for &v in &self.reached {
            self.dist[v] = UNREACHED;
        }
        self.reached.clear();
        self.heap.clear();
    }

    pub fn dist(&self, v: VertexId) -> Dist {
        Dist::new(self.dist[v])
    }

    pub fn is_reached(&self, v: VertexId) -> bool {
        self.dist[v] != UNREACHED
    }

    /// Vertices in the order they were first reached.
    pub fn reached(&self) -> &[VertexId] {
        &self.reached
    }

    /// Adds `sources` at distance 0 and settles every vertex within `limit`
    /// reachable through vertices accepted by `allowed`. Earlier distances are
    /// kept and corrected, so repeated calls compute multi-source distances from
    /// the union of all sources given so far. Returns the index into
    /// [`reached`](Self::reached) where the newly reached vertices start.
    pub fn grow<I, F>(&mut self, g: &Graph, sources: I, limit: u64, allowed: F) -> usize
    where
        I: IntoIterator<Item = VertexId>,
        F: Fn(VertexId) -> bool,
    {
        let start = self.reached.len();
        for s in sources {
            if self.dist[s] == UNREACHED {
                self.reached.push(s);
            }
            if self.dist[s] != 0 {
                self.dist[s] = 0;
                self.heap.push(Reverse((0, s)));
            }
        }
        while let Some(Reverse((d, x))) = self.heap.pop() {
            if d > self.dist[x] {
                continue;
            }
            for &(y, w) in g.neighbors(x) {
                let nd = d + w;
                if nd > limit || nd >= self.dist[y] || !allowed(y) {
                    continue;
                }
                if self.dist[y] == UNREACHED {
                    self.reached.push(y);
                }
                self.dist[y] = nd;
                self.heap.push(Reverse((nd, y)));
            }
        }
        start
    }

    /// Builds the shortest-path tree of the current search from `root`, which
    /// must be its only source. Parent ties go to the smallest vertex id.
    pub fn to_tree<F>(&self, g: &Graph, id: TreeId, root: VertexId, allowed: F) -> ShortestPathTree
    where
        F: Fn(VertexId) -> bool,
    {
        let records = self.reached.iter().map(|&v| {
            let dv = self.dist[v];
            let parent = if v == root {
                root
            } else {
                g.neighbors(v)
                    .iter()
                    .find(|&&(x, w)| self.dist[x] != UNREACHED && allowed(x) && self.dist[x] + w == dv)
                    .map(|&(x, _)| x)
                    .expect("reached vertex has a tight parent")
            };
            (v, parent, dv)
        });
        ShortestPathTree::from_records(id, root, records.collect())
            .expect("search produces a well-formed tree")
    }
}

/// Single-source distances to every vertex.
pub fn distances(g: &Graph, source: VertexId) -> Vec<Dist> {
    let mut space = SearchSpace::new(g.n());
    space.grow(g, [source], UNREACHED - 1, |_| true);
    (0..g.n()).map(|v| space.dist(v)).collect()
}

pub fn exact_distance(g: &Graph, u: VertexId, v: VertexId) -> Dist {
    if u == v {
        return Dist::ZERO;
    }
    // bidirectional would be faster; a plain early-exit search is enough for baselines
    let mut dist = vec![UNREACHED; g.n()];
    let mut heap = BinaryHeap::new();
    dist[u] = 0;
    heap.push(Reverse((0u64, u)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if x == v {
            return Dist::new(d);
        }
        if d > dist[x] {
            continue;
        }
        for &(y, w) in g.neighbors(x) {
            if d + w < dist[y] {
                dist[y] = d + w;
                heap.push(Reverse((d + w, y)));
            }
        }
    }
    Dist::INFINITY
}

/// `{ u : d(v, u) <= rho }`, sorted by vertex id.
pub fn ball(g: &Graph, v: VertexId, rho: Radius) -> Vec<VertexId> {
    let mut space = SearchSpace::new(g.n());
    space.grow(g, [v], rho.floor(), |_| true);
    let mut out = space.reached().to_vec();
    out.sort_unstable();
    out
}

/// Largest finite distance from `v`.
pub fn eccentricity(g: &Graph, v: VertexId) -> Dist {
    distances(g, v).into_iter().filter(|d| d.is_finite()).max().unwrap_or(Dist::ZERO)
}

/// Twice the eccentricity of vertex 0, an upper bound on the diameter of a
/// connected graph.
pub fn diameter_upper_bound(g: &Graph) -> Result<Dist> {
    if g.n() == 0 {
        return Ok(Dist::ZERO);
    }
    let d = distances(g, 0);
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::Disconnected);
    }
    let ecc = d.into_iter().max().unwrap_or(Dist::ZERO);
    Ok(Dist::new(2 * ecc.value()))
}

/// Per-component variant of [`diameter_upper_bound`]: the largest bound over
/// all components, each measured from its smallest vertex.
pub fn component_diameter_bound(g: &Graph) -> Dist {
    let comp = g.components();
    let mut seen = HashSet::new();
    let mut space = SearchSpace::new(g.n());
    let mut best = 0;
    for v in 0..g.n() {
        if !seen.insert(comp[v]) {
            continue;
        }
        space.clear();
        space.grow(g, [v], UNREACHED - 1, |_| true);
        let ecc = space.reached().iter().map(|&x| space.dist(x).value()).max().unwrap_or(0);
        best = best.max(2 * ecc);
    }
    Dist::new(best)
}

/// Shortest-path tree from `root`, optionally inside the subgraph induced by
/// `restrict`. The tree spans root's component within that subgraph.
pub fn shortest_path_tree(
    g: &Graph,
    root: VertexId,
    restrict: Option<&[VertexId]>,
) -> Result<ShortestPathTree> {
    g.check_vertex(root)?;
    let mut space = SearchSpace::new(g.n());
    match restrict {
        None => {
            space.grow(g, [root], UNREACHED - 1, |_| true);
            Ok(space.to_tree(g, 0, root, |_| true))
        }
        Some(set) => {
            let mut member = vec![false; g.n()];
            for &v in set {
                g.check_vertex(v)?;
                member[v] = true;
            }
            if !member[root] {
                return Err(Error::Precondition(format!("root {root} is not in the restricting set")));
            }
            space.grow(g, [root], UNREACHED - 1, |v| member[v]);
            Ok(space.to_tree(g, 0, root, |v| member[v]))
        }
    }
}
