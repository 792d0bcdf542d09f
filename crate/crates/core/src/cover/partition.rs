//! Padded partitions by ball carving, and the randomized cover built from
//! `2k` independent partitions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{escape_distances, BuildStats, ClusterId, Construction, SparseCover};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::radius::Radius;
use crate::rng::{self, Stream};
use crate::spt::ShortestPathTree;
use crate::sssp::SearchSpace;

/// Disjoint cells covering every vertex, each with strong diameter at most
/// `delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub delta: f64,
    pub cells: Vec<ShortestPathTree>,
    pub cell_of: Vec<usize>,
}

/// Draws a radius from the exponential distribution with rate `lambda`
/// truncated to `[0, max]`, by inverting its CDF.
fn truncated_exponential<R: Rng>(rng: &mut R, lambda: f64, max: f64) -> f64 {
    let u: f64 = rng.gen();
    if lambda <= 0.0 {
        return u * max;
    }
    let mass = -(-lambda * max).exp_m1(); // 1 - e^{-lambda * max}
    let x = -(-u * mass).ln_1p() / lambda;
    x.clamp(0.0, max)
}

/// Repeatedly carves the ball of a random radius around the smallest uncovered
/// vertex out of the remaining graph. Radii follow the exponential
/// distribution with rate `4 ln n / delta` truncated to `[0, delta / 2]`.
pub fn padded_partition(g: &Graph, delta: f64, seed: u64) -> Result<Partition> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let n = g.n();
    let lambda = 4.0 * (n.max(1) as f64).ln() / delta;
    let mut rng = rng::stream(seed, Stream::Partition(0));
    let mut covered = vec![false; n];
    let mut cell_of = vec![usize::MAX; n];
    let mut cells = Vec::new();
    let mut space = SearchSpace::new(n);
    for center in 0..n {
        if covered[center] {
            continue;
        }
        let r = truncated_exponential(&mut rng, lambda, delta / 2.0);
        space.clear();
        space.grow(g, [center], r.floor() as u64, |v| !covered[v]);
        let cell = space.to_tree(g, cells.len() as ClusterId, center, |v| !covered[v]);
        for &v in cell.members() {
            covered[v] = true;
            cell_of[v] = cells.len();
        }
        cells.push(cell);
    }
    Ok(Partition { delta, cells, cell_of })
}

/// Union of `2k` padded partitions with `delta = 64 k n^{1/k} rho`. Fails with
/// the list of vertices whose `rho`-ball is cut by every partition.
pub fn build_cover_randomized(g: &Graph, rho: Radius, k: u32, seed: u64) -> Result<SparseCover> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if rho.value() <= 0.0 {
        return Err(Error::InvalidParameter("rho must be positive".into()));
    }
    let n = g.n();
    let root_n = (n.max(1) as f64).powf(1.0 / k as f64);
    let beta = 64.0 * k as f64 * root_n;
    let delta = beta * rho.value();
    let limit = rho.floor();

    let mut clusters = Vec::new();
    let mut padded: Vec<Option<ClusterId>> = vec![None; n];
    let mut member = vec![false; n];
    let mut esc = vec![u64::MAX; n];
    for i in 0..2 * k {
        let part = padded_partition(g, delta, rng::derive_seed(seed, Stream::Partition(i as u64)))?;
        let offset = clusters.len() as ClusterId;
        for cell in &part.cells {
            let unpadded_here: Vec<VertexId> =
                cell.members().iter().copied().filter(|&v| padded[v].is_none()).collect();
            if unpadded_here.is_empty() {
                continue;
            }
            for &v in cell.members() {
                member[v] = true;
            }
            escape_distances(g, cell.members(), &member, limit, &mut esc);
            for v in unpadded_here {
                if esc[v] > limit {
                    padded[v] = Some(offset + cell.id());
                }
            }
            for &v in cell.members() {
                member[v] = false;
                esc[v] = u64::MAX;
            }
        }
        for mut cell in part.cells {
            let id = offset + cell.id();
            cell.set_id(id);
            clusters.push(cell);
        }
    }

    let failed: Vec<VertexId> = (0..n).filter(|&v| padded[v].is_none()).collect();
    if !failed.is_empty() {
        return Err(Error::PaddingFailure(failed));
    }
    let stats = BuildStats { phases: 2 * k, max_growth_steps: 0, attempts: 1 };
    Ok(SparseCover::assemble(n, rho, k, beta, 2 * k, Construction::Randomized { seed }, stats, clusters, padded))
}

/// Retries [`build_cover_randomized`] with seeds `seed, seed + 1, ...` until
/// every vertex is padded or `attempts` seeds are exhausted.
pub fn build_cover_randomized_with_retries(
    g: &Graph,
    rho: Radius,
    k: u32,
    seed: u64,
    attempts: u32,
) -> Result<SparseCover> {
    let mut last = Error::InvalidParameter("attempts must be at least 1".into());
    for a in 0..attempts {
        match build_cover_randomized(g, rho, k, seed.wrapping_add(a as u64)) {
            Ok(mut cover) => {
                cover.stats.attempts = a + 1;
                return Ok(cover);
            }
            Err(e @ Error::PaddingFailure(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;
    use crate::graph::{generate, GraphKind};
    use crate::sssp::exact_distance;

    #[test]
    fn truncated_exponential_stays_in_range() {
        let mut rng = rng::stream(1, Stream::Generator);
        for lambda in [0.0, 0.1, 5.0] {
            for _ in 0..1000 {
                let x = truncated_exponential(&mut rng, lambda, 7.0);
                assert!((0.0..=7.0).contains(&x));
            }
        }
    }

    #[test]
    fn truncated_exponential_mean() {
        // mean of Exp(lambda) truncated to [0, b]: 1/lambda - b e^{-lambda b} / (1 - e^{-lambda b})
        let (lambda, b) = (0.5f64, 4.0f64);
        let expected = 1.0 / lambda - b * (-lambda * b).exp() / (1.0 - (-lambda * b).exp());
        let mut rng = rng::stream(9, Stream::Generator);
        let samples = 200_000;
        let mean: f64 = (0..samples).map(|_| truncated_exponential(&mut rng, lambda, b)).sum::<f64>() / samples as f64;
        assert!((mean - expected).abs() < 0.02, "mean {mean} vs {expected}");
    }

    #[test]
    fn single_vertex_partition() {
        let g = Graph::from_edges(1, []).unwrap();
        for seed in 0..5 {
            let p = padded_partition(&g, 10.0, seed).unwrap();
            assert_eq!(p.cells.len(), 1);
            assert_eq!(p.cells[0].members(), &[0]);
        }
    }

    #[test]
    fn unit_edge_outcomes() {
        let g = generate(&GraphKind::Path { n: 2 }, 0).unwrap();
        let mut seen = std::collections::HashSet::new();
        for seed in 0..200 {
            let p = padded_partition(&g, 10.0, seed).unwrap();
            let shape: Vec<Vec<usize>> = p.cells.iter().map(|c| c.members().to_vec()).collect();
            assert!(shape == vec![vec![0, 1]] || shape == vec![vec![0], vec![1]], "{shape:?}");
            seen.insert(shape);
        }
        assert_eq!(seen.len(), 2, "both outcomes occur");
    }

    #[test]
    fn path_partition_is_bounded() {
        let g = generate(&GraphKind::Path { n: 5 }, 0).unwrap();
        let p = padded_partition(&g, 20.0, 1).unwrap();
        let mut all: Vec<usize> = p.cells.iter().flat_map(|c| c.members().to_vec()).collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        for c in &p.cells {
            for &a in c.members() {
                for &b in c.members() {
                    // strong diameter: the cell of a path graph is an interval
                    let d = exact_distance(&g, a, b).value();
                    assert!(d <= 20);
                    let sub = crate::sssp::shortest_path_tree(&g, a, Some(c.members())).unwrap();
                    assert_eq!(sub.dist_to_root(b).unwrap().value(), d);
                }
            }
        }
    }

    #[test]
    fn randomized_single_vertex() {
        let g = Graph::from_edges(1, []).unwrap();
        let c = build_cover_randomized(&g, Radius::integer(1), 1, 3).unwrap();
        assert_eq!(c.clusters().len(), 2);
        assert_eq!(c.padded(0), Some(0));
    }

    #[test]
    fn randomized_overlap_is_exactly_two_k() {
        let g = generate(&GraphKind::Random { n: 60, m: 150, max_weight: 2 }, 4).unwrap();
        for k in 1..=3 {
            let c = build_cover_randomized_with_retries(&g, Radius::integer(1), k, 0, 32).unwrap();
            assert!((0..60).all(|v| c.membership(v).len() == 2 * k as usize));
            let st = verify_cover(&g, &c);
            assert!(st.is_valid_for(&c), "{st:?}");
        }
    }

    #[test]
    fn path_success_rate() {
        let g = generate(&GraphKind::Path { n: 10 }, 0).unwrap();
        let ok = (0..20).filter(|&s| build_cover_randomized(&g, Radius::integer(1), 2, s).is_ok()).count();
        assert!(ok >= 12, "only {ok}/20 seeds padded every vertex");
    }
}
