//! Undirected graphs with positive integer edge weights.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: u64,
}

/// Immutable undirected graph. Adjacency lists are sorted by neighbor id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, u64)>>,
    unit_weights: bool,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(VertexId, VertexId, u64)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::from_edges(r.n, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges.iter().map(|e| (e.u, e.v, e.w)).collect() }
    }
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Duplicate edges collapse to the
    /// minimum weight; self-loops are dropped since they never shorten a path.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, u64)>,
    {
        let mut best: HashMap<(VertexId, VertexId), u64> = HashMap::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if w == 0 {
                return Err(Error::NonPositiveWeight { u, v, weight: 0 });
            }
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            best.entry(key).and_modify(|old| *old = (*old).min(w)).or_insert(w);
        }
        let mut edges: Vec<Edge> = best.into_iter().map(|((u, v), w)| Edge { u, v, w }).collect();
        edges.sort_unstable_by_key(|e| (e.u, e.v));

        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let unit_weights = edges.iter().all(|e| e.w == 1);
        Ok(Graph { n, edges, adj, unit_weights })
    }

    /// Parses the edge-list format: a header line `n m` followed by exactly `m`
    /// lines `u v w`. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, reason: "missing header".into() })?;
        let header: Vec<&str> = header.split_whitespace().collect();
        if header.len() != 2 {
            return Err(Error::Parse { line: hline, reason: "header must be `n m`".into() });
        }
        let n: usize = parse_field(header[0], hline, "n")?;
        let m: usize = parse_field(header[1], hline, "m")?;

        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines {
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse { line, reason: format!("expected `u v w`, got {body:?}") });
            }
            let u: VertexId = parse_field(fields[0], line, "u")?;
            let v: VertexId = parse_field(fields[1], line, "v")?;
            let w: i64 = parse_field(fields[2], line, "w")?;
            if w <= 0 {
                return Err(Error::NonPositiveWeight { u, v, weight: w });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            edges.push((u, v, w as u64));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                reason: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edges.len()).unwrap();
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.u, e.v, e.w).unwrap();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, u64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.unit_weights
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<u64> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| list[i].1)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Component id per vertex; ids are assigned in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, _) in &self.adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Order-independent 64-bit fingerprint of the vertex count and edge set.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        h.write_u64(self.n as u64);
        for e in &self.edges {
            h.write_u64(e.u as u64);
            h.write_u64(e.v as u64);
            h.write_u64(e.w);
        }
        h.finish()
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, name: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, reason: format!("invalid {name}: {s:?}") })
}

/// FNV-1a, used for stable fingerprints (std's hasher is not stable across releases).
pub(crate) struct Fnv(u64);

impl Fnv {
    pub(crate) fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn write_u64(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}

/// Graph families for experiments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphKind {
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    Star { n: usize },
    /// `m` distinct edges drawn uniformly among all pairs, redrawn until connected.
    Random { n: usize, m: usize, max_weight: u64 },
    /// Uniform random recursive tree plus `extra` distinct random chords.
    Sparse { n: usize, extra: usize, max_weight: u64 },
}

const MAX_CONNECT_ATTEMPTS: usize = 10_000;

/// Deterministic for fixed `(kind, seed)`.
pub fn generate(kind: &GraphKind, seed: u64) -> Result<Graph> {
    let mut rng = rng::stream(seed, rng::Stream::Generator);
    match *kind {
        GraphKind::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i, 1))),
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs at least 3 vertices".into()));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1)))
        }
        GraphKind::Grid { rows, cols } => {
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1), 1));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c), 1));
                    }
                }
            }
            Graph::from_edges(rows * cols, edges)
        }
        GraphKind::Star { n } => Graph::from_edges(n, (1..n).map(|i| (0, i, 1))),
        GraphKind::Random { n, m, max_weight } => {
            let pairs = n * n.saturating_sub(1) / 2;
            if n > 0 && m < n - 1 {
                return Err(Error::InvalidParameter(format!("m = {m} < n - 1 cannot be connected")));
            }
            if m > pairs {
                return Err(Error::InvalidParameter(format!("m = {m} exceeds the {pairs} vertex pairs")));
            }
            if max_weight == 0 {
                return Err(Error::InvalidParameter("max_weight must be at least 1".into()));
            }
            for _ in 0..MAX_CONNECT_ATTEMPTS {
                let mut chosen = HashSet::with_capacity(m);
                let mut edges = Vec::with_capacity(m);
                while edges.len() < m {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u == v || !chosen.insert((u.min(v), u.max(v))) {
                        continue;
                    }
                    edges.push((u, v, rng.gen_range(1..=max_weight)));
                }
                let g = Graph::from_edges(n, edges)?;
                if g.is_connected() {
                    return Ok(g);
                }
            }
            Err(Error::GenerationFailed { attempts: MAX_CONNECT_ATTEMPTS })
        }
        GraphKind::Sparse { n, extra, max_weight } => {
            if max_weight == 0 {
                return Err(Error::InvalidParameter("max_weight must be at least 1".into()));
            }
            let pairs = n * n.saturating_sub(1) / 2;
            if n.saturating_sub(1) + extra > pairs {
                return Err(Error::InvalidParameter(format!("{extra} chords do not fit in {n} vertices")));
            }
            let mut label: Vec<VertexId> = (0..n).collect();
            label.shuffle(&mut rng);
            let mut chosen = HashSet::new();
            let mut edges = Vec::new();
            for i in 1..n {
                let j = rng.gen_range(0..i);
                let (u, v) = (label[i], label[j]);
                chosen.insert((u.min(v), u.max(v)));
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
            while edges.len() < n.saturating_sub(1) + extra {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u == v || !chosen.insert((u.min(v), u.max(v))) {
                    continue;
                }
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
            Graph::from_edges(n, edges)
        }
    }
}
