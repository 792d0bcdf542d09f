//! Region growing over the set of `rho`-balls.
//!
//! Each phase scans the balls still unassigned in increasing center order. A
//! cluster starts from one ball and repeatedly absorbs every remaining ball
//! that touches it, for as long as this multiplies the number of absorbed balls
//! by at least `1 + ln n / (k n^{1/k})`. When growth stalls, the union of the
//! absorbed balls becomes a cluster, the absorbed balls are retired (their
//! centers are padded by the cluster), and every ball touching the cluster is
//! set aside until the next phase, so clusters of one phase are disjoint.
//!
//! Ball intersection uses symmetry of the metric: `B(c, rho)` meets a vertex
//! set `X` iff `d(c, X) <= rho`, so the touching balls are exactly the centers
//! reached by a `rho`-truncated multi-source search from `X`. Both the cluster
//! body (`X`, grown from the absorbed centers) and the touching centers are
//! maintained incrementally.

use crate::cover::{BuildStats, ClusterId, Construction, SparseCover};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::radius::Radius;
use crate::sssp::SearchSpace;

pub fn build_cover_deterministic(g: &Graph, rho: Radius, k: u32) -> Result<SparseCover> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if rho.value() <= 0.0 {
        return Err(Error::InvalidParameter("rho must be positive".into()));
    }
    let n = g.n();
    let nf = n.max(1) as f64;
    let root_n = nf.powf(1.0 / k as f64);
    let growth = 1.0 + nf.ln() / (k as f64 * root_n);
    let beta = 8.0 * k as f64 * root_n;
    let limit = rho.floor();

    let mut unassigned = vec![true; n];
    let mut remaining = n;
    let mut padded = vec![None; n];
    let mut clusters = Vec::new();
    let mut stats = BuildStats::default();

    let mut body = SearchSpace::new(n); // distances to the absorbed centers
    let mut touch = SearchSpace::new(n); // distances to the cluster body
    let mut tree_space = SearchSpace::new(n);
    let mut absorbed = Vec::new();

    while remaining > 0 {
        stats.phases += 1;
        let mut available = unassigned.clone();
        for start in 0..n {
            if !available[start] {
                continue;
            }
            body.clear();
            touch.clear();
            absorbed.clear();

            // absorbed = S, touching = ∂(S) restricted to available balls; S is
            // always a prefix of `touching`
            let mut touching = Vec::new();
            let mut touch_cursor = 0;
            let mut new_centers = vec![start];
            let mut steps = 0u32;
            loop {
                let from = body.grow(g, new_centers.iter().copied(), limit, |_| true);
                let new_body = body.reached()[from..].to_vec();
                absorbed.extend_from_slice(&new_centers);
                touch.grow(g, new_body, limit, |_| true);
                for &c in &touch.reached()[touch_cursor..] {
                    if available[c] {
                        touching.push(c);
                    }
                }
                touch_cursor = touch.reached().len();
                debug_assert_eq!(&touching[..absorbed.len()], &absorbed[..]);

                let grows = touching.len() > absorbed.len()
                    && touching.len() as f64 >= absorbed.len() as f64 * growth;
                if !grows {
                    break;
                }
                steps += 1;
                new_centers = touching[absorbed.len()..].to_vec();
            }
            stats.max_growth_steps = stats.max_growth_steps.max(steps);

            let id = clusters.len() as ClusterId;
            tree_space.clear();
            tree_space.grow(g, [start], u64::MAX - 1, |v| body.is_reached(v));
            let tree = tree_space.to_tree(g, id, start, |v| body.is_reached(v));
            debug_assert_eq!(tree.len(), body.reached().len(), "cluster body is connected");
            clusters.push(tree);

            for &c in &touching {
                available[c] = false;
            }
            for &c in &absorbed {
                unassigned[c] = false;
                padded[c] = Some(id);
                remaining -= 1;
            }
        }
    }

    Ok(SparseCover::assemble(
        n,
        rho,
        k,
        beta,
        2 * k,
        Construction::Deterministic,
        stats,
        clusters,
        padded,
    ))
}
