#![allow(dead_code)]

use pathcover::{generate, Graph, GraphKind};

pub const INF: u64 = u64::MAX;

/// All-pairs distances by Floyd-Warshall, independent of the library's searches.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in g.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.w);
        d[e.v][e.u] = d[e.v][e.u].min(e.w);
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Distances inside the subgraph induced by `members` (Floyd-Warshall).
pub fn strong_diameter(g: &Graph, members: &[usize]) -> u64 {
    let idx = |v: usize| members.binary_search(&v).ok();
    let n = members.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
    }
    for e in g.edges() {
        if let (Some(a), Some(b)) = (idx(e.u), idx(e.v)) {
            d[a][b] = d[a][b].min(e.w);
            d[b][a] = d[b][a].min(e.w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.iter().flatten().copied().max().unwrap_or(0)
}

/// Connected graph: random spanning tree plus chords.
pub fn connected(n: usize, extra: usize, max_weight: u64, seed: u64) -> Graph {
    let pairs = n * n.saturating_sub(1) / 2;
    let extra = extra.min(pairs - n.saturating_sub(1));
    generate(&GraphKind::Sparse { n, extra, max_weight }, seed).unwrap()
}

/// `n^{1/k}` times `k`.
pub fn big_k(n: usize, k: u32) -> f64 {
    k as f64 * (n.max(1) as f64).powf(1.0 / k as f64)
}

/// Unweighted single-source distances by plain BFS.
pub fn bfs(g: &Graph, s: usize) -> Vec<u64> {
    let mut d = vec![INF; g.n()];
    let mut queue = std::collections::VecDeque::from([s]);
    d[s] = 0;
    while let Some(x) = queue.pop_front() {
        for &(y, _) in g.neighbors(x) {
            if d[y] == INF {
                d[y] = d[x] + 1;
                queue.push_back(y);
            }
        }
    }
    d
}
