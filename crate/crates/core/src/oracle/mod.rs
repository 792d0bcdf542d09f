//! Path-reporting distance oracle for unweighted graphs.
//!
//! A hitting set `N` meets every ball of radius `2p`. Thorup-Zwick clusters
//! are grown on the whole graph, but only vertices of `N` keep bunches, and
//! each cluster tree is pruned down to its root, a small separator and the
//! vertices of `N`. A query maps both endpoints to their representatives in
//! `N`, finds a common witness tree, walks the pruned skeleton between them,
//! thins it to hops of length between `p` and `3p`, and fills every hop with a
//! tree path from a sparse cover of radius `3p`. Close pairs are answered by
//! the cover directly.
//!
//! With `s > 1` there are `s` gap covers of radii `(3p)^{i/s}` and each hop
//! uses the smallest cover whose padded cluster works, found by binary search.

pub mod hitting;
pub mod pruned;
pub mod separator;
pub mod tz;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cover::{build_cover_deterministic, ClusterId, SparseCover};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::path::Path;
use crate::radius::{floor_root_power, Radius};

pub use hitting::{hitting_set, HittingSet};
pub use pruned::{prune_tree, sparsify_skeleton, PrunedTree};
pub use separator::tree_separator;
pub use tz::{find_witness, tz_build, BunchStore, TzBuild, TzLevels, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleParams {
    pub k: u32,
    pub p: u64,
    pub t: u32,
    pub s: u32,
}

impl OracleParams {
    /// `t = k`, `p = ceil(n^{1/k})`, `s = ceil(1 / eps)`.
    pub fn from_epsilon(n: usize, k: u32, eps: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter("eps must be positive".into()));
        }
        let n = n.max(1) as u64;
        let mut p = floor_root_power(n, 1, k);
        if (p as u128).pow(k) < n as u128 {
            p += 1;
        }
        let inv = 1.0 / eps;
        // treat 1/eps within rounding of an integer as that integer
        let s = if (inv - inv.round()).abs() < 1e-9 { inv.round() } else { inv.ceil() };
        Ok(OracleParams { k, p, t: k, s: s.max(1.0) as u32 })
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.p == 0 || self.t == 0 || self.s == 0 {
            return Err(Error::InvalidParameter("k, p, t and s must all be at least 1".into()));
        }
        Ok(())
    }

    fn big_k(&self, n: usize) -> f64 {
        self.k as f64 * (n.max(1) as f64).powf(1.0 / self.k as f64)
    }

    /// Upper bound on the returned path length for a pair at distance `d`.
    pub fn envelope(&self, n: usize, d: u64) -> f64 {
        let kk = self.big_k(n);
        let (p, t, d) = (self.p as f64, self.t as f64, d as f64);
        let mult = if self.s == 1 { t } else { t + (3.0 * p).powf(1.0 / self.s as f64) };
        100.0 * mult * kk * d + 100.0 * p * kk
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunedOracle {
    params: OracleParams,
    seed: u64,
    n: usize,
    levels: TzLevels,
    hitting: HittingSet,
    store: BunchStore,
    trees: Vec<PrunedTree>,
    gap_covers: Vec<SparseCover>,
}

pub fn build_oracle(g: &Graph, params: OracleParams, seed: u64) -> Result<PrunedOracle> {
    params.validate()?;
    if !g.is_unit_weighted() {
        return Err(Error::WeightedInput);
    }
    let OracleParams { k, p, t, s } = params;
    let hitting = hitting_set(g, 2 * p)?;
    let mut search = tz::ClusterSearch::new(g, t, seed)?;
    let mut collect = tz::BunchCollector::new(&search, &hitting.members);
    let mut trees = Vec::with_capacity(g.n());
    for w in 0..g.n() {
        let tree = search.cluster_tree(w);
        collect.add(&tree);
        let pruned = prune_tree(&tree, |v| hitting.contains(v), p);
        assert!(pruned.max_gap() <= p, "pruned tree {w} has a gap above {p}");
        trees.push(pruned);
    }
    let levels = search.levels().clone();
    let store = collect.finish();

    let mut gap_covers = Vec::with_capacity(s as usize);
    let mut next: ClusterId = 0;
    for i in 1..=s {
        let mut cover = build_cover_deterministic(g, Radius::root_power(3 * p, i, s)?, k)?;
        cover.renumber(next);
        next += cover.clusters().len() as ClusterId;
        gap_covers.push(cover);
    }
    Ok(PrunedOracle { params, seed, n: g.n(), levels, hitting, store, trees, gap_covers })
}

/// Cover path between two close vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapFill {
    pub path: Path,
    /// 1-based index of the cover used; 0 for the trivial case `a = b`.
    pub cover: u32,
    pub probes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryTrace {
    pub path: Path,
    pub base_case: bool,
    pub witness: Option<Witness>,
    /// Thinned skeleton with cumulative tree distances.
    pub hops: Vec<(VertexId, u64)>,
    pub witness_ns: u64,
    pub path_ns: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub cover_records: usize,
    pub hitting_records: usize,
    pub bunch_records: usize,
    pub pivot_records: usize,
    pub pruned_hitting_records: usize,
    pub pruned_separator_records: usize,
    pub pruned_root_records: usize,
    pub total_words: usize,
    /// `k n + t n^{1 + 1/t} / p`.
    pub formula: f64,
}

impl PrunedOracle {
    pub fn params(&self) -> OracleParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &TzLevels {
        &self.levels
    }

    pub fn hitting(&self) -> &HittingSet {
        &self.hitting
    }

    pub fn store(&self) -> &BunchStore {
        &self.store
    }

    pub fn tree(&self, w: VertexId) -> &PrunedTree {
        &self.trees[w]
    }

    pub fn gap_covers(&self) -> &[SparseCover] {
        &self.gap_covers
    }

    pub fn envelope(&self, d: u64) -> f64 {
        self.params.envelope(self.n, d)
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    fn in_top_cover(&self, a: VertexId, b: VertexId) -> bool {
        let top = self.gap_covers.last().expect("at least one gap cover");
        top.padded_cluster(a).is_some_and(|c| c.contains(b))
    }

    /// Tree path from `a` to `b` in the smallest-index gap cover found by
    /// binary search whose padded cluster of `a` contains `b`.
    pub fn fill_gap(&self, a: VertexId, b: VertexId) -> Result<GapFill> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Ok(GapFill { path: Path::single(a), cover: 0, probes: 0 });
        }
        if !self.in_top_cover(a, b) {
            return Err(Error::Precondition(format!("{b} is not in the padded gap cluster of {a}")));
        }
        let mut probes = 1;
        let (mut lo, mut hi) = (0, self.gap_covers.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            probes += 1;
            if self.gap_covers[mid].padded_cluster(a).is_some_and(|c| c.contains(b)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let path = self.gap_covers[hi].padded_cluster(a).unwrap().tree_path(a, b)?;
        Ok(GapFill { path, cover: hi as u32 + 1, probes })
    }

    pub fn query_path(&self, u: VertexId, v: VertexId) -> Result<Path> {
        self.query_path_traced(u, v).map(|t| t.path)
    }

    /// [`query_path`](Self::query_path) with intermediate results and the time
    /// split between the witness search and path assembly.
    pub fn query_path_traced(&self, u: VertexId, v: VertexId) -> Result<QueryTrace> {
        self.check(u)?;
        self.check(v)?;
        let start = Instant::now();
        if u == v || self.in_top_cover(u, v) {
            let path = self.fill_gap(u, v)?.path;
            let path_ns = start.elapsed().as_nanos() as u64;
            return Ok(QueryTrace { path, base_case: true, witness: None, hops: Vec::new(), witness_ns: 0, path_ns });
        }

        let (ru, rv) = (self.hitting.rep[u], self.hitting.rep[v]);
        let witness = find_witness(&self.store, ru, rv).ok_or(Error::Unreachable { u, v })?;
        let witness_ns = start.elapsed().as_nanos() as u64;

        let start = Instant::now();
        let p = self.params.p;
        let skeleton = self.trees[witness.w].skeleton(ru, rv)?;
        let hops = sparsify_skeleton(&skeleton, p);
        let mut path = self.hitting.rep_path(u);
        for (j, pair) in hops.windows(2).enumerate() {
            let gap = pair[1].1 - pair[0].1;
            let last = j + 2 == hops.len();
            assert!(gap <= 3 * p && (last || gap >= p), "skeleton hop of {gap} outside [{p}, {}]", 3 * p);
            path.extend(&self.fill_gap(pair[0].0, pair[1].0)?.path);
        }
        let mut tail = self.hitting.rep_path(v);
        tail.vertices.reverse();
        path.extend(&tail);
        let path_ns = start.elapsed().as_nanos() as u64;
        Ok(QueryTrace { path, base_case: false, witness: Some(witness), hops, witness_ns, path_ns })
    }

    pub fn space_report(&self) -> SpaceReport {
        let cover_records: usize = self.gap_covers.iter().map(|c| c.tree_records()).sum();
        let padded_records = self.gap_covers.len() * self.n;
        let hitting_records = self.hitting.len() + 3 * self.n;
        let (bunch_records, pivot_records) = self.store.records();
        let (mut hit, mut sep, mut roots) = (0, 0, 0);
        for t in &self.trees {
            for &v in t.members() {
                if v == t.root() {
                    roots += 1;
                } else if self.hitting.contains(v) {
                    hit += 1;
                } else {
                    sep += 1;
                }
            }
        }
        // tree records: vertex, parent, distance; bunch and pivot entries: vertex,
        // distance; pruned records: vertex, ancestor, gap, distance
        let total_words = 3 * cover_records
            + padded_records
            + hitting_records
            + 2 * (bunch_records + pivot_records)
            + 4 * (hit + sep + roots);
        let n = self.n as f64;
        let OracleParams { k, p, t, .. } = self.params;
        let formula = k as f64 * n + t as f64 * n.powf(1.0 + 1.0 / t as f64) / p as f64;
        SpaceReport {
            cover_records,
            hitting_records,
            bunch_records,
            pivot_records,
            pruned_hitting_records: hit,
            pruned_separator_records: sep,
            pruned_root_records: roots,
            total_words,
            formula,
        }
    }

    /// Structural consistency checks for deserialized oracles.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let n = self.n;
        let bad = |what: &str| Err(Error::Corrupted(format!("oracle: {what}")));
        if self.levels.level.len() != n
            || self.hitting.parent.len() != n
            || self.hitting.rep.len() != n
            || self.hitting.rep_dist.len() != n
            || self.trees.len() != n
        {
            return bad("per-vertex tables have the wrong length");
        }
        if self.gap_covers.len() != self.params.s as usize || self.gap_covers.iter().any(|c| c.n() != n) {
            return bad("gap covers do not match the parameters");
        }
        if self.store.owners != self.hitting.members
            || self.store.pivots.len() != self.store.owners.len()
            || self.store.bunches.len() != self.store.owners.len()
        {
            return bad("bunch store does not match the hitting set");
        }
        for (w, t) in self.trees.iter().enumerate() {
            if t.root() != w {
                return bad("pruned tree stored under the wrong root");
            }
            t.validate()?;
        }
        if self.hitting.parent.iter().chain(&self.hitting.rep).any(|&v| v >= n) {
            return bad("hitting-set pointer out of range");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::path::validate_path;
    use crate::sssp::distances;

    #[test]
    fn epsilon_entry_point() {
        let p = OracleParams::from_epsilon(300, 2, 0.5).unwrap();
        assert_eq!(p, OracleParams { k: 2, p: 18, t: 2, s: 2 });
        let p = OracleParams::from_epsilon(16, 2, 1.0 / 3.0).unwrap();
        assert_eq!((p.p, p.s), (4, 3));
        assert!(OracleParams::from_epsilon(16, 2, 0.0).is_err());
    }

    #[test]
    fn single_vertex_oracle() {
        let g = Graph::from_edges(1, []).unwrap();
        let o = build_oracle(&g, OracleParams { k: 1, p: 1, t: 1, s: 1 }, 0).unwrap();
        let path = o.query_path(0, 0).unwrap();
        assert_eq!(path.vertices, vec![0]);
        assert_eq!(path.length.value(), 0);
        let r = o.space_report();
        assert!(r.total_words <= 20);
    }

    #[test]
    fn small_diameter_is_base_case() {
        let g = generate(&GraphKind::Grid { rows: 3, cols: 3 }, 0).unwrap();
        let o = build_oracle(&g, OracleParams { k: 2, p: 2, t: 2, s: 1 }, 1).unwrap();
        for u in 0..9 {
            for v in 0..9 {
                let tr = o.query_path_traced(u, v).unwrap();
                assert!(tr.base_case);
                validate_path(&g, &tr.path.vertices, u, v).unwrap();
            }
        }
    }

    #[test]
    fn weighted_rejected() {
        let g = Graph::from_edges(2, [(0, 1, 3)]).unwrap();
        let params = OracleParams { k: 1, p: 1, t: 1, s: 1 };
        assert_eq!(build_oracle(&g, params, 0).unwrap_err(), Error::WeightedInput);
    }

    #[test]
    fn gap_fill_on_path() {
        let g = generate(&GraphKind::Path { n: 40 }, 0).unwrap();
        let params = OracleParams { k: 2, p: 9, t: 2, s: 3 };
        let o = build_oracle(&g, params, 0).unwrap();
        let kk = 2.0 * 40f64.sqrt();
        for a in 0..40usize {
            for b in a.saturating_sub(27)..(a + 28).min(40) {
                let f = o.fill_gap(a, b).unwrap();
                let len = validate_path(&g, &f.path.vertices, a, b).unwrap().value();
                let d = a.abs_diff(b) as f64;
                if f.cover > 1 {
                    assert!(d > 27f64.powf((f.cover - 1) as f64 / 3.0));
                }
                if a != b {
                    assert!(len as f64 <= 8.0 * kk * 27f64.powf(f.cover as f64 / 3.0));
                    assert!(f.probes <= 3);
                }
            }
        }
    }

    #[test]
    fn far_pairs_on_long_path() {
        let g = generate(&GraphKind::Path { n: 120 }, 0).unwrap();
        let params = OracleParams { k: 3, p: 2, t: 2, s: 1 };
        let o = build_oracle(&g, params, 4).unwrap();
        let mut far = 0;
        for u in (0..120).step_by(7) {
            let d = distances(&g, u);
            for v in 0..120 {
                let tr = o.query_path_traced(u, v).unwrap();
                let len = validate_path(&g, &tr.path.vertices, u, v).unwrap();
                assert_eq!(len, tr.path.length);
                assert!(len >= d[v]);
                assert!((len.value() as f64) <= o.envelope(d[v].value()));
                far += !tr.base_case as usize;
            }
        }
        assert!(far > 0);
    }

    #[test]
    fn disconnected_pairs_fail() {
        let g = Graph::from_edges(30, (0..14).map(|i| (i, i + 1, 1)).chain((15..29).map(|i| (i, i + 1, 1)))).unwrap();
        let o = build_oracle(&g, OracleParams { k: 2, p: 1, t: 2, s: 1 }, 0).unwrap();
        assert!(matches!(o.query_path(0, 29), Err(Error::Unreachable { .. })));
        assert!(o.query_path(0, 14).is_ok());
    }

    #[test]
    fn deterministic_serialization() {
        let g = generate(&GraphKind::Random { n: 70, m: 150, max_weight: 1 }, 3).unwrap();
        let params = OracleParams { k: 2, p: 2, t: 2, s: 2 };
        let a = serde_json::to_string(&build_oracle(&g, params, 5).unwrap()).unwrap();
        let b = serde_json::to_string(&build_oracle(&g, params, 5).unwrap()).unwrap();
        assert_eq!(a, b);
        let back: PrunedOracle = serde_json::from_str(&a).unwrap();
        back.validate().unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }
}
