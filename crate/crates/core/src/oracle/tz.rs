//! Sampled levels, pivots, bunches and clusters of the Thorup-Zwick
//! construction on unweighted graphs.
//!
//! `A_0 = V` and each `A_i` keeps every vertex of `A_{i-1}` independently with
//! probability `n^{-1/t}`; `A_t` is empty. The cluster of `w` in
//! `A_{i-1} \ A_i` is `C(w) = { u : d(w, u) < d(u, A_i) }` and the bunch of
//! `u` is `B(u) = { w : u in C(w) }`.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rng::{self, Stream};
use crate::spt::{ShortestPathTree, TreeId};

pub const FAR: u64 = u64::MAX;

/// `level[v]` is the largest `i` with `v` in `A_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TzLevels {
    pub t: u32,
    pub seed: u64,
    pub level: Vec<u32>,
}

impl TzLevels {
    /// Samples the levels. The smallest vertex of every component is forced
    /// into `A_{t-1}` so the top level meets each component.
    pub fn sample(g: &Graph, t: u32, seed: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        let n = g.n();
        let prob = (n.max(1) as f64).powf(-1.0 / t as f64);
        let mut rng = rng::stream(seed, Stream::Levels);
        let mut level = vec![0u32; n];
        for i in 1..t {
            for l in level.iter_mut() {
                if *l == i - 1 && rng.gen::<f64>() < prob {
                    *l = i;
                }
            }
        }
        let comp = g.components();
        let mut seen = vec![false; n];
        for v in 0..n {
            if !seen[comp[v]] {
                seen[comp[v]] = true;
                level[v] = t - 1;
            }
        }
        Ok(TzLevels { t, seed, level })
    }

    pub fn contains(&self, i: u32, v: VertexId) -> bool {
        i < self.t && self.level[v] >= i
    }

    pub fn members(&self, i: u32) -> Vec<VertexId> {
        (0..self.level.len()).filter(|&v| self.contains(i, v)).collect()
    }
}

/// Pivot and distance per vertex per level; `FAR` where `A_i` is out of reach.
#[derive(Debug, Clone)]
struct Pivots {
    pivot: Vec<Vec<VertexId>>,
    dist: Vec<Vec<u64>>,
}

/// Multi-source BFS from each level; ties go to the smallest pivot id.
fn pivots(g: &Graph, levels: &TzLevels) -> Pivots {
    let n = g.n();
    let mut pivot = Vec::new();
    let mut dist = Vec::new();
    for i in 0..levels.t {
        let mut p = vec![usize::MAX; n];
        let mut d = vec![FAR; n];
        let mut queue = VecDeque::new();
        for v in levels.members(i) {
            p[v] = v;
            d[v] = 0;
            queue.push_back(v);
        }
        while let Some(x) = queue.pop_front() {
            for &(y, _) in g.neighbors(x) {
                if d[y] == FAR {
                    d[y] = d[x] + 1;
                    queue.push_back(y);
                }
                if d[y] == d[x] + 1 && p[x] < p[y] {
                    p[y] = p[x];
                }
            }
        }
        pivot.push(p);
        dist.push(d);
    }
    // When A_{i+1} is as close as A_i, reuse the higher pivot. It is still a
    // nearest level-i vertex, and now every pivot of v lies in B(v).
    for i in (0..pivot.len().saturating_sub(1)).rev() {
        for v in 0..n {
            if dist[i][v] == dist[i + 1][v] {
                pivot[i][v] = pivot[i + 1][v];
            }
        }
    }
    Pivots { pivot, dist }
}

/// Bunches and pivots of the hitting-set members only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BunchStore {
    pub t: u32,
    /// Sorted vertices whose bunches are stored.
    pub owners: Vec<VertexId>,
    /// Per owner, `(p_i, d(v, A_i))` for `i < t`.
    pub pivots: Vec<Vec<(VertexId, u64)>>,
    /// Per owner, `(w, d(v, w))` sorted by `w`.
    pub bunches: Vec<Vec<(VertexId, u64)>>,
}

impl BunchStore {
    fn slot(&self, v: VertexId) -> Option<usize> {
        self.owners.binary_search(&v).ok()
    }

    pub fn pivot(&self, v: VertexId, i: u32) -> Option<(VertexId, u64)> {
        let &(p, d) = self.pivots.get(self.slot(v)?)?.get(i as usize)?;
        (d != FAR).then_some((p, d))
    }

    pub fn bunch(&self, v: VertexId) -> Option<&[(VertexId, u64)]> {
        self.slot(v).map(|s| self.bunches[s].as_slice())
    }

    /// `d(v, w)` if `w` is in the bunch of `v`.
    pub fn bunch_dist(&self, v: VertexId, w: VertexId) -> Option<u64> {
        let b = self.bunch(v)?;
        b.binary_search_by_key(&w, |e| e.0).ok().map(|i| b[i].1)
    }

    pub fn records(&self) -> (usize, usize) {
        let bunch = self.bunches.iter().map(Vec::len).sum();
        let pivot = self.pivots.iter().map(Vec::len).sum();
        (bunch, pivot)
    }
}

/// Cluster search state shared across roots.
pub(crate) struct ClusterSearch<'g> {
    g: &'g Graph,
    levels: TzLevels,
    pivots: Pivots,
    dist: Vec<u64>,
    touched: Vec<VertexId>,
}

impl<'g> ClusterSearch<'g> {
    pub(crate) fn new(g: &'g Graph, t: u32, seed: u64) -> Result<Self> {
        if !g.is_unit_weighted() {
            return Err(Error::WeightedInput);
        }
        let levels = TzLevels::sample(g, t, seed)?;
        let pivots = pivots(g, &levels);
        Ok(ClusterSearch { g, levels, pivots, dist: vec![FAR; g.n()], touched: Vec::new() })
    }

    pub(crate) fn levels(&self) -> &TzLevels {
        &self.levels
    }

    /// BFS from `w` that enters `u` only while `d(w, u) < d(u, A_{l+1})`,
    /// `l` being the level of `w`. Shortest paths from `w` to cluster members
    /// stay inside the cluster, so BFS distances are graph distances.
    pub(crate) fn cluster_tree(&mut self, w: VertexId) -> ShortestPathTree {
        for &x in &self.touched {
            self.dist[x] = FAR;
        }
        self.touched.clear();
        let next = self.levels.level[w] as usize + 1;
        let bound = self.pivots.dist.get(next);
        self.dist[w] = 0;
        self.touched.push(w);
        let mut head = 0;
        while head < self.touched.len() {
            let x = self.touched[head];
            head += 1;
            let nd = self.dist[x] + 1;
            for &(y, _) in self.g.neighbors(x) {
                if self.dist[y] == FAR && bound.map_or(true, |b| nd < b[y]) {
                    self.dist[y] = nd;
                    self.touched.push(y);
                }
            }
        }
        let records = self
            .touched
            .iter()
            .map(|&u| {
                let d = self.dist[u];
                let parent = if u == w {
                    w
                } else {
                    self.g
                        .neighbors(u)
                        .iter()
                        .map(|&(x, _)| x)
                        .find(|&x| self.dist[x] != FAR && self.dist[x] + 1 == d)
                        .expect("cluster is closed under shortest paths from its root")
                };
                (u, parent, d)
            })
            .collect();
        ShortestPathTree::from_records(w as TreeId, w, records).expect("search yields a valid tree")
    }

    fn owner_pivots(&self, v: VertexId) -> Vec<(VertexId, u64)> {
        (0..self.levels.t as usize).map(|i| (self.pivots.pivot[i][v], self.pivots.dist[i][v])).collect()
    }
}

/// Accumulates bunches of selected owners from cluster trees.
pub(crate) struct BunchCollector {
    store: BunchStore,
}

impl BunchCollector {
    pub(crate) fn new(search: &ClusterSearch, owners: &[VertexId]) -> Self {
        let store = BunchStore {
            t: search.levels.t,
            owners: owners.to_vec(),
            pivots: owners.iter().map(|&v| search.owner_pivots(v)).collect(),
            bunches: vec![Vec::new(); owners.len()],
        };
        BunchCollector { store }
    }

    /// Roots must be fed in increasing order so bunches come out sorted.
    pub(crate) fn add(&mut self, tree: &ShortestPathTree) {
        for (u, _, d) in tree.records() {
            if let Some(s) = self.store.slot(u) {
                self.store.bunches[s].push((tree.root(), d.value()));
            }
        }
    }

    pub(crate) fn finish(self) -> BunchStore {
        self.store
    }
}

#[derive(Debug, Clone)]
pub struct TzBuild {
    pub levels: TzLevels,
    pub store: BunchStore,
    /// `trees[w]` spans `C(w)`.
    pub trees: Vec<ShortestPathTree>,
}

/// Levels, bunches of `owners`, and the cluster tree of every vertex.
pub fn tz_build(g: &Graph, t: u32, owners: &[VertexId], seed: u64) -> Result<TzBuild> {
    let mut search = ClusterSearch::new(g, t, seed)?;
    let mut collect = BunchCollector::new(&search, owners);
    let mut trees = Vec::with_capacity(g.n());
    for w in 0..g.n() {
        let tree = search.cluster_tree(w);
        collect.add(&tree);
        trees.push(tree);
    }
    Ok(TzBuild { levels: search.levels, store: collect.finish(), trees })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub w: VertexId,
    pub du: u64,
    pub dv: u64,
    pub probes: u32,
}

impl Witness {
    pub fn sum(&self) -> u64 {
        self.du + self.dv
    }
}

/// Alternating pivot search for `w` in `B(u) ∩ B(v)` with
/// `d(u, w) + d(w, v) <= (2t - 1) d(u, v)`. `None` only when `u` and `v` lie
/// in different components. Both vertices must own stored bunches.
pub fn find_witness(store: &BunchStore, u: VertexId, v: VertexId) -> Option<Witness> {
    let (mut a, mut b) = (u, v);
    let (mut w, mut da) = store.pivot(a, 0)?;
    let mut probes = 0;
    let mut i = 0;
    loop {
        probes += 1;
        if let Some(db) = store.bunch_dist(b, w) {
            let (du, dv) = if i % 2 == 0 { (da, db) } else { (db, da) };
            return Some(Witness { w, du, dv, probes });
        }
        i += 1;
        if i >= store.t {
            return None;
        }
        std::mem::swap(&mut a, &mut b);
        (w, da) = store.pivot(a, i)?;
    }
}
