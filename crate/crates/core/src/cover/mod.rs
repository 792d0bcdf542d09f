//! Strong-diameter sparse covers.
//!
//! A `(beta, s, rho)` cover is a set of clusters, each inducing a connected
//! subgraph of diameter at most `beta * rho`, such that every `rho`-ball lies
//! inside some cluster (the vertex is *padded* by it) and no vertex belongs to
//! more than `s` clusters. Every cluster carries a shortest-path tree of its
//! induced subgraph, which is what the oracles above this module walk.

mod deterministic;
mod partition;

pub use deterministic::build_cover_deterministic;
pub use partition::{
    build_cover_randomized, build_cover_randomized_with_retries, padded_partition, Partition,
};

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::radius::Radius;
use crate::spt::{ShortestPathTree, TreeId};
use crate::sssp::SearchSpace;

pub type ClusterId = TreeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Construction {
    Deterministic,
    Randomized { seed: u64 },
}

/// Counters recorded while building a cover.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    /// Outer phases of the region-growing loop (deterministic) or partitions
    /// drawn (randomized).
    pub phases: u32,
    /// Largest number of growth steps taken by a single cluster.
    pub max_growth_steps: u32,
    /// Seeds tried before the randomized construction padded every vertex.
    pub attempts: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoverRepr", into = "CoverRepr")]
pub struct SparseCover {
    rho: Radius,
    k: u32,
    beta: f64,
    s: u32,
    construction: Construction,
    stats: BuildStats,
    first_id: ClusterId,
    clusters: Vec<ShortestPathTree>,
    membership: Vec<Vec<ClusterId>>,
    padded: Vec<Option<ClusterId>>,
}

#[derive(Serialize, Deserialize)]
struct CoverRepr {
    rho: f64,
    rho_floor: u64,
    k: u32,
    beta: f64,
    s: u32,
    construction: Construction,
    stats: BuildStats,
    n: usize,
    clusters: Vec<ShortestPathTree>,
    padded: Vec<Option<ClusterId>>,
}

impl TryFrom<CoverRepr> for SparseCover {
    type Error = Error;

    fn try_from(r: CoverRepr) -> Result<Self> {
        let rho = Radius::from_f64(r.rho)?;
        if rho.floor() != r.rho_floor {
            return Err(Error::Corrupted("inconsistent radius".into()));
        }
        if r.padded.len() != r.n {
            return Err(Error::Corrupted(format!("padded has {} entries for {} vertices", r.padded.len(), r.n)));
        }
        let first_id = r.clusters.first().map(|c| c.id()).unwrap_or(0);
        for (i, c) in r.clusters.iter().enumerate() {
            if c.id() != first_id + i as ClusterId {
                return Err(Error::Corrupted("cluster ids are not consecutive".into()));
            }
            if c.members().iter().any(|&v| v >= r.n) {
                return Err(Error::Corrupted(format!("cluster {} has a vertex out of range", c.id())));
            }
        }
        let mut cover = SparseCover {
            rho,
            k: r.k,
            beta: r.beta,
            s: r.s,
            construction: r.construction,
            stats: r.stats,
            first_id,
            clusters: r.clusters,
            membership: Vec::new(),
            padded: r.padded,
        };
        for p in cover.padded.iter().flatten() {
            if cover.cluster(*p).is_none() {
                return Err(Error::Corrupted(format!("padded cluster {p} does not exist")));
            }
        }
        cover.rebuild_membership(r.n);
        Ok(cover)
    }
}

impl From<SparseCover> for CoverRepr {
    fn from(c: SparseCover) -> Self {
        CoverRepr {
            rho: c.rho.value(),
            rho_floor: c.rho.floor(),
            k: c.k,
            beta: c.beta,
            s: c.s,
            construction: c.construction,
            stats: c.stats,
            n: c.padded.len(),
            clusters: c.clusters,
            padded: c.padded,
        }
    }
}

impl SparseCover {
    pub(crate) fn assemble(
        n: usize,
        rho: Radius,
        k: u32,
        beta: f64,
        s: u32,
        construction: Construction,
        stats: BuildStats,
        clusters: Vec<ShortestPathTree>,
        padded: Vec<Option<ClusterId>>,
    ) -> Self {
        let mut cover = SparseCover {
            rho,
            k,
            beta,
            s,
            construction,
            stats,
            first_id: 0,
            clusters,
            membership: Vec::new(),
            padded,
        };
        cover.rebuild_membership(n);
        cover
    }

    fn rebuild_membership(&mut self, n: usize) {
        let mut membership = vec![Vec::new(); n];
        for c in &self.clusters {
            for &v in c.members() {
                membership[v].push(c.id());
            }
        }
        self.membership = membership;
    }

    /// Shifts all cluster ids so they start at `first_id`; used to give every
    /// cluster of a multi-scale structure a globally unique id.
    pub fn renumber(&mut self, first_id: ClusterId) {
        let old = self.first_id;
        let shift = |id: ClusterId| id - old + first_id;
        for c in &mut self.clusters {
            let id = shift(c.id());
            c.set_id(id);
        }
        for list in &mut self.membership {
            for id in list.iter_mut() {
                *id = shift(*id);
            }
        }
        for p in self.padded.iter_mut().flatten() {
            *p = shift(*p);
        }
        self.first_id = first_id;
    }

    /// Drops clusters rejected by `keep`. Vertices padded by a dropped cluster
    /// become unpadded.
    pub fn retain_clusters<F: FnMut(&ShortestPathTree) -> bool>(&mut self, mut keep: F) {
        let n = self.padded.len();
        let mut remap = std::collections::HashMap::new();
        let first = self.first_id;
        let mut kept = Vec::new();
        for c in std::mem::take(&mut self.clusters) {
            if keep(&c) {
                let mut c = c;
                let new_id = first + kept.len() as ClusterId;
                remap.insert(c.id(), new_id);
                c.set_id(new_id);
                kept.push(c);
            }
        }
        self.clusters = kept;
        for p in &mut self.padded {
            *p = p.and_then(|id| remap.get(&id).copied());
        }
        self.rebuild_membership(n);
    }

    pub fn rho(&self) -> Radius {
        self.rho
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Radius blow-up bound.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Overlap bound.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    pub fn n(&self) -> usize {
        self.padded.len()
    }

    pub fn clusters(&self) -> &[ShortestPathTree] {
        &self.clusters
    }

    pub fn first_id(&self) -> ClusterId {
        self.first_id
    }

    pub fn cluster(&self, id: ClusterId) -> Option<&ShortestPathTree> {
        id.checked_sub(self.first_id).and_then(|i| self.clusters.get(i as usize))
    }

    /// Clusters containing `v`, in increasing id order.
    pub fn membership(&self, v: VertexId) -> &[ClusterId] {
        &self.membership[v]
    }

    /// The cluster padding `v`.
    pub fn padded(&self, v: VertexId) -> Option<ClusterId> {
        self.padded[v]
    }

    pub fn padded_cluster(&self, v: VertexId) -> Option<&ShortestPathTree> {
        self.padded[v].and_then(|id| self.cluster(id))
    }

    /// Total number of `(vertex, parent, dist)` tree records.
    pub fn tree_records(&self) -> usize {
        self.clusters.iter().map(|c| c.len()).sum()
    }
}

/// Recomputed cover quality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStats {
    /// Largest strong diameter over all clusters.
    pub max_diameter: u64,
    pub max_overlap: usize,
    pub unpadded_count: usize,
    pub clusters: usize,
}

impl CoverStats {
    /// All three cover properties hold for the cover's own parameters.
    pub fn is_valid_for(&self, cover: &SparseCover) -> bool {
        self.unpadded_count == 0
            && self.max_overlap <= cover.s() as usize
            && self.max_diameter as f64 <= cover.beta() * cover.rho().value()
    }
}

/// Recomputes strong diameters, overlap and padding from scratch.
pub fn verify_cover(g: &Graph, cover: &SparseCover) -> CoverStats {
    let n = g.n();
    let max_overlap = (0..n).map(|v| cover.membership(v).len()).max().unwrap_or(0);

    let mut member = vec![false; n];
    let mut space = SearchSpace::new(n);

    // Exact strong diameters, visiting clusters by decreasing 2*depth so that
    // clusters which cannot beat the current maximum are skipped.
    let mut order: Vec<&ShortestPathTree> = cover.clusters().iter().collect();
    order.sort_by_key(|c| Reverse(c.depth().value()));
    let mut max_diameter = 0;
    for c in order {
        if 2 * c.depth().value() <= max_diameter {
            continue;
        }
        for &v in c.members() {
            member[v] = true;
        }
        max_diameter = diameter_above(g, c, &member, &mut space, max_diameter);
        for &v in c.members() {
            member[v] = false;
        }
    }

    // v is padded by C iff no vertex outside C lies within rho of v; the
    // nearest outside vertex is reached through C, so a boundary-seeded search
    // restricted to C yields the escape distance of every member.
    let mut padded_by: Vec<Vec<VertexId>> = vec![Vec::new(); cover.clusters().len()];
    let mut unpadded_count = 0;
    for v in 0..n {
        match cover.padded(v) {
            Some(id) if cover.cluster(id).is_some_and(|c| c.contains(v)) => {
                padded_by[(id - cover.first_id()) as usize].push(v)
            }
            _ => unpadded_count += 1,
        }
    }
    let limit = cover.rho().floor();
    let mut esc = vec![u64::MAX; n];
    for (i, c) in cover.clusters().iter().enumerate() {
        if padded_by[i].is_empty() {
            continue;
        }
        for &v in c.members() {
            member[v] = true;
        }
        escape_distances(g, c.members(), &member, limit, &mut esc);
        unpadded_count += padded_by[i].iter().filter(|&&v| esc[v] <= limit).count();
        for &v in c.members() {
            member[v] = false;
            esc[v] = u64::MAX;
        }
    }

    CoverStats { max_diameter, max_overlap, unpadded_count, clusters: cover.clusters().len() }
}

/// `max(floor, strong diameter of c)`, exact. Keeps lower and upper
/// eccentricity bounds per member and only searches from members whose upper
/// bound can still beat the best diameter found so far.
fn diameter_above(g: &Graph, c: &ShortestPathTree, member: &[bool], space: &mut SearchSpace, floor: u64) -> u64 {
    let m = c.len();
    let mut best = floor;
    // seed the upper bounds with the tree: ecc(x) <= d_T(x, root) + depth
    let depth = c.depth().value();
    let mut lower = vec![0u64; m];
    let mut upper: Vec<u64> = c.records().map(|(_, _, d)| d.value() + depth).collect();
    let mut alive: Vec<usize> = (0..m).filter(|&i| upper[i] > best).collect();
    let mut high = true;
    while !alive.is_empty() {
        // alternate between the largest upper and the smallest lower bound
        let pick = if high {
            *alive.iter().max_by_key(|&&i| (upper[i], Reverse(i))).unwrap()
        } else {
            *alive.iter().min_by_key(|&&i| (lower[i], i)).unwrap()
        };
        high = !high;
        space.clear();
        space.grow(g, [c.members()[pick]], u64::MAX - 1, |x| member[x]);
        if space.reached().len() < m {
            return u64::MAX;
        }
        let ecc = space.reached().iter().map(|&x| space.dist(x).value()).max().unwrap_or(0);
        best = best.max(ecc);
        for (i, &v) in c.members().iter().enumerate() {
            let d = space.dist(v).value();
            lower[i] = lower[i].max(d).max(ecc.saturating_sub(d));
            upper[i] = upper[i].min(ecc + d);
        }
        lower[pick] = ecc;
        upper[pick] = ecc;
        alive.retain(|&i| upper[i] > best && lower[i] < upper[i]);
    }
    best
}

/// Distance from each member to the nearest non-member, over paths whose
/// interior lies in the member set; values above `limit` are left at MAX.
pub(crate) fn escape_distances(g: &Graph, members: &[VertexId], member: &[bool], limit: u64, esc: &mut [u64]) {
    let mut heap = BinaryHeap::new();
    for &v in members {
        let d = g
            .neighbors(v)
            .iter()
            .filter(|&&(x, _)| !member[x])
            .map(|&(_, w)| w)
            .min();
        if let Some(d) = d.filter(|&d| d <= limit) {
            esc[v] = d;
            heap.push(Reverse((d, v)));
        }
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > esc[v] {
            continue;
        }
        for &(x, w) in g.neighbors(v) {
            let nd = d + w;
            if member[x] && nd <= limit && nd < esc[x] {
                esc[x] = nd;
                heap.push(Reverse((nd, x)));
            }
        }
    }
}
