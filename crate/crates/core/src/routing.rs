//! Labeled routing over the labeling covers with interval routing inside
//! cluster trees.
//!
//! Every cover tree gets a DFS numbering (children in ascending vertex order).
//! A vertex's table holds its interval, parent and root distance in each tree
//! containing it; its label holds, per scale, its interval in the tree of its
//! padded cluster. A message for `v` picks the lowest scale whose tree (named
//! in `v`'s label) also contains the current vertex, then climbs until its
//! interval covers the target and descends through the child whose interval
//! does.

use serde::{Deserialize, Serialize};

use crate::cover::ClusterId;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::labeling::{build_labeling, LabelingScheme};
use crate::path::Path;
use crate::spt::ShortestPathTree;

/// Preorder interval `[lo, hi]` of a subtree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn contains(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRouteInfo {
    pub tree: ClusterId,
    pub interval: Interval,
    pub parent: VertexId,
    pub dist: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingTable {
    pub v: VertexId,
    /// Sorted by tree id.
    pub entries: Vec<TreeRouteInfo>,
}

impl RoutingTable {
    pub fn get(&self, tree: ClusterId) -> Option<&TreeRouteInfo> {
        self.entries.binary_search_by_key(&tree, |e| e.tree).ok().map(|i| &self.entries[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub tree: ClusterId,
    pub interval: Interval,
    pub dist: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingLabel {
    pub v: VertexId,
    /// One entry per scale.
    pub scales: Vec<LabelEntry>,
}

/// Interval label a neighbor exposes on the port towards it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Port {
    pub vertex: VertexId,
    pub interval: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Delivered,
    Forward(VertexId),
}

/// One forwarding decision from the current vertex's own record, the target's
/// interval and the intervals of the current vertex's tree children.
pub fn route_step(own: &TreeRouteInfo, target: &LabelEntry, children: &[Port]) -> Result<Step> {
    if own.interval == target.interval {
        return Ok(Step::Delivered);
    }
    if !own.interval.contains(target.interval) {
        return Ok(Step::Forward(own.parent));
    }
    children
        .iter()
        .find(|c| c.interval.contains(target.interval))
        .map(|c| Step::Forward(c.vertex))
        .ok_or_else(|| Error::Corrupted(format!("no child of tree {} covers the target interval", own.tree)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    pub delivered: bool,
    pub path: Path,
    pub hops: usize,
    /// `(vertex, tree, next)` per hop.
    pub trace: Vec<(VertexId, ClusterId, VertexId)>,
}

#[derive(Serialize)]
struct RouteSummary {
    delivered: bool,
    hops: usize,
    length: u64,
}

impl RouteResult {
    pub fn to_json(&self) -> String {
        let s = RouteSummary { delivered: self.delivered, hops: self.hops, length: self.path.length.value() };
        serde_json::to_string(&s).expect("plain struct serializes")
    }

    pub fn trace_lines(&self) -> String {
        self.trace.iter().map(|(u, t, next)| format!("step {u} {t} {next}\n")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingScheme {
    scheme: u64,
    k: u32,
    q: u32,
    path_stretch_bound: f64,
    tables: Vec<RoutingTable>,
    labels: Vec<RoutingLabel>,
    /// The network: neighbors with edge weights, used to read port labels and
    /// to charge hop lengths.
    network: Vec<Vec<(VertexId, u64)>>,
}

/// Preorder intervals of every member of `tree`, by member position.
fn dfs_intervals(tree: &ShortestPathTree) -> Vec<Interval> {
    let children = tree.children();
    let mut iv = vec![Interval { lo: 0, hi: 0 }; tree.len()];
    let root = tree.position(tree.root()).expect("root is a member");
    let mut clock = 0u32;
    // (position, next child index)
    let mut stack = vec![(root, 0usize)];
    while let Some(&mut (pos, ref mut next)) = stack.last_mut() {
        if *next == 0 {
            iv[pos].lo = clock;
            clock += 1;
        }
        if let Some(&c) = children[pos].get(*next) {
            *next += 1;
            stack.push((c as usize, 0));
        } else {
            iv[pos].hi = clock - 1;
            stack.pop();
        }
    }
    iv
}

pub fn build_routing(g: &Graph, k: u32, randomized: bool, seed: u64) -> Result<RoutingScheme> {
    let labeling = build_labeling(g, k, randomized, seed)?;
    Ok(routing_from_labeling(g, &labeling))
}

pub fn routing_from_labeling(g: &Graph, labeling: &LabelingScheme) -> RoutingScheme {
    let n = g.n();
    let mut tables: Vec<RoutingTable> = (0..n).map(|v| RoutingTable { v, entries: Vec::new() }).collect();
    for cover in labeling.covers() {
        for tree in cover.clusters() {
            let iv = dfs_intervals(tree);
            for (pos, (v, parent, dist)) in tree.records().enumerate() {
                tables[v].entries.push(TreeRouteInfo { tree: tree.id(), interval: iv[pos], parent, dist: dist.value() });
            }
        }
    }
    for t in &mut tables {
        t.entries.sort_unstable_by_key(|e| e.tree);
    }
    let labels = (0..n)
        .map(|v| {
            let scales = labeling
                .label(v)
                .padded
                .iter()
                .map(|&tree| {
                    let e = tables[v].get(tree).expect("padded tree contains its vertex");
                    LabelEntry { tree, interval: e.interval, dist: e.dist }
                })
                .collect();
            RoutingLabel { v, scales }
        })
        .collect();
    RoutingScheme {
        scheme: labeling.id(),
        k: labeling.k(),
        q: labeling.q(),
        path_stretch_bound: labeling.path_stretch_bound(),
        tables,
        labels,
        network: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
    }
}

impl RoutingScheme {
    pub fn n(&self) -> usize {
        self.tables.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn scheme_id(&self) -> u64 {
        self.scheme
    }

    pub fn table(&self, v: VertexId) -> &RoutingTable {
        &self.tables[v]
    }

    pub fn label(&self, v: VertexId) -> &RoutingLabel {
        &self.labels[v]
    }

    /// Multiplicative bound on route lengths, `max(d, 1)` times this.
    pub fn path_stretch_bound(&self) -> f64 {
        self.path_stretch_bound
    }

    pub fn max_table_records(&self) -> usize {
        self.tables.iter().map(|t| t.entries.len()).max().unwrap_or(0)
    }

    pub fn max_label_records(&self) -> usize {
        self.labels.iter().map(|l| l.scales.len()).max().unwrap_or(0)
    }

    /// Interval labels of `u`'s children in `tree`, read from its neighbors.
    pub fn child_ports(&self, u: VertexId, tree: ClusterId) -> Vec<Port> {
        self.network[u]
            .iter()
            .filter_map(|&(x, _)| {
                let e = self.tables[x].get(tree)?;
                (e.parent == u && x != u).then_some(Port { vertex: x, interval: e.interval })
            })
            .collect()
    }

    /// Routes from `u` to the vertex whose label is `target`.
    pub fn route(&self, u: VertexId, target: &RoutingLabel) -> Result<RouteResult> {
        if u >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: u, n: self.n() });
        }
        let v = target.v;
        let entry = target
            .scales
            .iter()
            .find(|e| self.tables[u].get(e.tree).is_some())
            .ok_or(Error::Unreachable { u, v })?;
        let mut path = Path::single(u);
        let mut trace = Vec::new();
        let mut x = u;
        for _ in 0..=2 * self.n() {
            let own = self.tables[x].get(entry.tree).ok_or(Error::NotInTree(x))?;
            match route_step(own, entry, &self.child_ports(x, entry.tree))? {
                Step::Delivered => {
                    let hops = trace.len();
                    return Ok(RouteResult { delivered: x == v, path, hops, trace });
                }
                Step::Forward(next) => {
                    let w = self.network[x]
                        .iter()
                        .find(|e| e.0 == next)
                        .map(|e| e.1)
                        .ok_or(Error::NonEdgeHop { u: x, v: next })?;
                    trace.push((x, entry.tree, next));
                    path.vertices.push(next);
                    path.length = path.length + Dist::new(w);
                    x = next;
                }
            }
        }
        let hops = trace.len();
        Ok(RouteResult { delivered: false, path, hops, trace })
    }

    pub fn route_to(&self, u: VertexId, v: VertexId) -> Result<RouteResult> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        self.route(u, &self.labels[v])
    }
}
