//! Multi-scale distance labeling over sparse covers.
//!
//! Scale `i` (for `i = 0..=q`, `q = ceil(k log_n Δ)`) holds a cover with
//! radius `n^{i/k}`, overlap `2k` and a shortest-path tree per cluster. A
//! vertex label stores, per scale, the id of the cluster padding the vertex,
//! and for every tree containing the vertex its parent and root distance. Two
//! labels suffice to answer a distance query: binary search for a scale `j`
//! whose padded cluster of `u` also contains `v` (while the cluster at `j - 1`
//! does not), then add the two root distances in that tree.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cover::{
    build_cover_deterministic, build_cover_randomized_with_retries, ClusterId, SparseCover,
};
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Fnv, Graph, VertexId};
use crate::path::Path;
use crate::radius::{ceil_k_log, Radius};
use crate::rng::{self, Stream};
use crate::spt::ShortestPathTree;
use crate::sssp::component_diameter_bound;

pub const DEFAULT_RETRIES: u32 = 32;

/// Distance scales `n^{i/k}` for `i = 0..=q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSet {
    pub k: u32,
    pub n: usize,
    pub delta: u64,
    pub q: u32,
    pub radii: Vec<Radius>,
}

impl ScaleSet {
    /// `delta` is clamped to at least 1.
    pub fn new(n: usize, delta: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let delta = delta.max(1);
        let q = if n >= 2 { ceil_k_log(n as u64, delta, k) } else { 0 };
        let radii = (0..=q)
            .map(|i| Radius::root_power(n.max(1) as u64, i, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScaleSet { k, n, delta, q, radii })
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Parent and root distance of a vertex in one cluster tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub parent: VertexId,
    pub dist_to_root: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLabel {
    pub scheme: u64,
    pub v: VertexId,
    /// Padded cluster per scale.
    pub padded: Vec<ClusterId>,
    #[serde(serialize_with = "sorted_map", deserialize_with = "hash_map")]
    pub trees: HashMap<ClusterId, TreeRecord>,
}

fn sorted_map<S: Serializer>(m: &HashMap<ClusterId, TreeRecord>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.iter().collect::<BTreeMap<_, _>>().serialize(s)
}

fn hash_map<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<HashMap<ClusterId, TreeRecord>, D::Error> {
    Ok(BTreeMap::<ClusterId, TreeRecord>::deserialize(d)?.into_iter().collect())
}

impl VertexLabel {
    /// Stored records: one padded pointer per scale plus one per tree.
    pub fn record_count(&self) -> usize {
        self.padded.len() + self.trees.len()
    }

    /// Words, counting each vertex id or distance as one word.
    pub fn words(&self) -> usize {
        1 + self.padded.len() + 3 * self.trees.len()
    }
}

/// Result of the scale search, with the number of membership probes made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleSearch {
    pub scale: usize,
    pub cluster: ClusterId,
    pub probes: u32,
}

/// Binary search over scales for `j` with `v` in `C_j(u)` and not in
/// `C_{j-1}(u)` (or `j = 0`). `None` when even the top scale misses `v`, which
/// only happens across components.
pub fn search_scale(lu: &VertexLabel, lv: &VertexLabel) -> Option<ScaleSearch> {
    let mut probes = 0;
    let mut contains = |j: usize| {
        probes += 1;
        lv.trees.contains_key(&lu.padded[j])
    };
    let top = lu.padded.len().checked_sub(1)?;
    if !contains(top) {
        return None;
    }
    let (mut lo, mut hi) = (0, top);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if contains(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(ScaleSearch { scale: hi, cluster: lu.padded[hi], probes })
}

/// Distance estimate from two labels alone.
pub fn query_distance(lu: &VertexLabel, lv: &VertexLabel) -> Result<Dist> {
    if lu.scheme != lv.scheme {
        return Err(Error::SchemeMismatch(lu.scheme, lv.scheme));
    }
    if lu.v == lv.v {
        return Ok(Dist::ZERO);
    }
    let Some(found) = search_scale(lu, lv) else {
        return Ok(Dist::INFINITY);
    };
    let du = lu.trees[&found.cluster].dist_to_root;
    let dv = lv.trees[&found.cluster].dist_to_root;
    Ok(Dist::new(du + dv))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelingScheme {
    id: u64,
    k: u32,
    randomized: bool,
    seed: u64,
    scales: ScaleSet,
    covers: Vec<SparseCover>,
    labels: Vec<VertexLabel>,
}

/// Builds one cover per scale, deterministic or randomized; randomized scales
/// retry up to [`DEFAULT_RETRIES`] seeds on padding failure.
pub fn build_labeling(g: &Graph, k: u32, randomized: bool, seed: u64) -> Result<LabelingScheme> {
    build_labeling_with_retries(g, k, randomized, seed, DEFAULT_RETRIES)
}

pub fn build_labeling_with_retries(
    g: &Graph,
    k: u32,
    randomized: bool,
    seed: u64,
    retries: u32,
) -> Result<LabelingScheme> {
    let n = g.n();
    let delta = component_diameter_bound(g).value();
    let scales = ScaleSet::new(n, delta, k)?;

    let mut covers = Vec::with_capacity(scales.len());
    let mut next_id: ClusterId = 0;
    for (i, &rho) in scales.radii.iter().enumerate() {
        let mut cover = if randomized {
            let scale_seed = rng::derive_seed(seed, Stream::Scale(i as u64));
            build_cover_randomized_with_retries(g, rho, k, scale_seed, retries)?
        } else {
            build_cover_deterministic(g, rho, k)?
        };
        cover.renumber(next_id);
        next_id += cover.clusters().len() as ClusterId;
        covers.push(cover);
    }

    let mut h = Fnv::new();
    h.write_u64(g.fingerprint());
    h.write_u64(k as u64);
    h.write_u64(randomized as u64);
    h.write_u64(seed);
    let id = h.finish();

    let labels = (0..n).map(|v| label_of(id, v, &covers)).collect();
    Ok(LabelingScheme { id, k, randomized, seed, scales, covers, labels })
}

fn label_of(scheme: u64, v: VertexId, covers: &[SparseCover]) -> VertexLabel {
    let padded = covers.iter().map(|c| c.padded(v).expect("cover pads every vertex")).collect();
    let mut trees = HashMap::new();
    for cover in covers {
        for &id in cover.membership(v) {
            let t = cover.cluster(id).expect("membership refers to a cluster");
            let record = TreeRecord {
                parent: t.parent_of(v).expect("member"),
                dist_to_root: t.dist_to_root(v).expect("member").value(),
            };
            trees.insert(id, record);
        }
    }
    VertexLabel { scheme, v, padded, trees }
}

impl LabelingScheme {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn is_randomized(&self) -> bool {
        self.randomized
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scales(&self) -> &ScaleSet {
        &self.scales
    }

    pub fn q(&self) -> u32 {
        self.scales.q
    }

    pub fn covers(&self) -> &[SparseCover] {
        &self.covers
    }

    pub fn label(&self, v: VertexId) -> &VertexLabel {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    /// Radius blow-up of the covers: `8 k n^{1/k}`, or `64 k n^{1/k}` when randomized.
    pub fn gamma(&self) -> f64 {
        let root_n = (self.n().max(1) as f64).powf(1.0 / self.k as f64);
        let c = if self.randomized { 64.0 } else { 8.0 };
        c * self.k as f64 * root_n
    }

    /// Multiplicative bound on returned path lengths: `gamma * n^{1/k}`.
    pub fn path_stretch_bound(&self) -> f64 {
        self.gamma() * (self.n().max(1) as f64).powf(1.0 / self.k as f64)
    }

    /// Multiplicative bound on label distance estimates, twice the path bound.
    pub fn distance_stretch_bound(&self) -> f64 {
        2.0 * self.path_stretch_bound()
    }

    /// Finds the cluster tree that serves the pair `(u, v)`.
    pub fn serving_tree(&self, u: VertexId, v: VertexId) -> Result<(ScaleSearch, &ShortestPathTree)> {
        for x in [u, v] {
            if x >= self.n() {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n() });
            }
        }
        let found = search_scale(&self.labels[u], &self.labels[v]).ok_or(Error::Unreachable { u, v })?;
        let tree = self.covers[found.scale].cluster(found.cluster).expect("label points at a cluster");
        Ok((found, tree))
    }

    pub fn query_distance(&self, u: VertexId, v: VertexId) -> Result<Dist> {
        for x in [u, v] {
            if x >= self.n() {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n() });
            }
        }
        query_distance(&self.labels[u], &self.labels[v])
    }

    /// Tree path between `u` and `v` in the cluster found by the scale search.
    pub fn query_path(&self, u: VertexId, v: VertexId) -> Result<Path> {
        if u == v && u < self.n() {
            return Ok(Path::single(u));
        }
        let (_, tree) = self.serving_tree(u, v)?;
        tree.tree_path(u, v)
    }

    /// Checks that every label agrees with the stored covers.
    pub fn check_labels(&self) -> Result<()> {
        for v in 0..self.n() {
            if label_of(self.id, v, &self.covers) != self.labels[v] {
                return Err(Error::Corrupted(format!("label of {v} disagrees with the covers")));
            }
        }
        Ok(())
    }
}
