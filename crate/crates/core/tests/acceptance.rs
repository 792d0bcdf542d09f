//! Acceptance checks with explicit constants. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bfs, big_k, connected, floyd_warshall, INF};
use pathcover::cover::build_cover_randomized;
use pathcover::labeling::query_distance;
use pathcover::oracle::{find_witness, hitting_set, tree_separator, tz_build};
use pathcover::routing::RoutingScheme;
use pathcover::{
    build_cover_deterministic, build_cover_randomized_with_retries, build_labeling, build_oracle, build_routing,
    generate, serial, shortest_path_tree, validate_path, verify_cover, Graph, GraphKind, LabelingScheme,
    OracleParams, PrunedOracle, Radius, SparseCover,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn radii(n: usize, k: u32) -> [Radius; 3] {
    [Radius::integer(1), Radius::integer(4), Radius::root_power(n as u64, 1, k).unwrap()]
}

fn ks(n: usize) -> Vec<u32> {
    let ln = (n as f64).ln().ceil() as u32;
    let mut ks = vec![1, 2, 3, ln];
    ks.dedup();
    ks
}

/// Random connected weighted graphs with `n` spread over `[lo, hi]`.
fn spread(count: usize, lo: usize, hi: usize, max_weight: u64, salt: u64) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let n = lo + (hi - lo) * i / (count - 1).max(1);
            connected(n, n, max_weight, salt * 1000 + i as u64)
        })
        .collect()
}

/// Unweighted test graphs with long shortest paths mixed with random ones.
fn unweighted_family(count: usize, max_n: usize, salt: u64) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let n = 20 + (max_n - 20) * i / (count - 1);
            let seed = salt * 1000 + i as u64;
            match i % 5 {
                0 => generate(&GraphKind::Grid { rows: n / 10, cols: 10 }, seed).unwrap(),
                1 => generate(&GraphKind::Cycle { n }, seed).unwrap(),
                2 => connected(n, n / 10, 1, seed),
                3 => connected(n, n / 2, 1, seed),
                _ => connected(n, 2 * n, 1, seed),
            }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut building = 0.0;
    let mut builds = 0;
    let mut worst = 0.0f64;
    for g in spread(50, 50, 2000, 8, 1) {
        let n = g.n();
        for k in ks(n) {
            for rho in radii(n, k) {
                let start = Instant::now();
                let c = build_cover_deterministic(&g, rho, k).map_err(|e| e.to_string())?;
                building += start.elapsed().as_secs_f64();
                let st = verify_cover(&g, &c);
                let bound = 8.0 * big_k(n, k) * rho.value();
                ensure!(st.max_overlap <= 2 * k as usize, "n={n} k={k}: overlap {}", st.max_overlap);
                ensure!(st.unpadded_count == 0, "n={n} k={k}: {} unpadded", st.unpadded_count);
                ensure!(st.max_diameter as f64 <= bound, "n={n} k={k}: diameter {} > {bound}", st.max_diameter);
                ensure!(c.stats().phases <= 2 * k, "n={n} k={k}: {} phases", c.stats().phases);
                worst = worst.max(st.max_diameter as f64 / bound);
                builds += 1;
            }
        }
    }
    ensure!(building < 60.0, "building took {building:.1}s");
    Ok(format!("{builds} covers built in {building:.1}s, max diameter/bound {worst:.3}"))
}

fn criterion_2() -> Outcome {
    let mut builds = 0;
    for g in spread(50, 50, 2000, 8, 2) {
        let n = g.n();
        for k in ks(n) {
            for rho in radii(n, k) {
                let c = build_cover_randomized_with_retries(&g, rho, k, n as u64, 64).map_err(|e| e.to_string())?;
                let st = verify_cover(&g, &c);
                let bound = 64.0 * big_k(n, k) * rho.value();
                ensure!((0..n).all(|v| c.membership(v).len() == 2 * k as usize), "n={n} k={k}: overlap not 2k");
                ensure!(st.unpadded_count == 0, "n={n} k={k}: {} unpadded", st.unpadded_count);
                ensure!(st.max_diameter as f64 <= bound, "n={n} k={k}: diameter {} > {bound}", st.max_diameter);
                builds += 1;
            }
        }
    }
    let g = connected(1000, 1000, 8, 77);
    let mut worst = 1.0f64;
    for k in ks(1000) {
        for rho in radii(1000, k) {
            let ok = (0..20).filter(|&s| build_cover_randomized(&g, rho, k, s).is_ok()).count();
            let rate = ok as f64 / 20.0;
            ensure!(rate >= 0.6, "k={k} rho={}: success rate {rate}", rho.value());
            worst = worst.min(rate);
        }
    }
    Ok(format!("{builds} valid covers, lowest single-attempt success rate at n=1000: {:.0}%", worst * 100.0))
}

fn criterion_3() -> Outcome {
    let mut pairs = 0u64;
    let mut worst = 0.0f64;
    for g in spread(20, 10, 200, 8, 3) {
        let n = g.n();
        let fw = floyd_warshall(&g);
        for k in 1..=3 {
            let s = build_labeling(&g, k, false, 0).map_err(|e| e.to_string())?;
            let q = s.q() as usize;
            let n2k = (n as f64).powf(2.0 / k as f64);
            for u in 0..n {
                let records = s.label(u).record_count();
                ensure!(records <= 2 * k as usize * (q + 1) + q + 1, "n={n} k={k}: {records} records");
                for v in 0..n {
                    let d = fw[u][v];
                    let est = query_distance(s.label(u), s.label(v)).map_err(|e| e.to_string())?.value();
                    ensure!(d <= est, "n={n} k={k} ({u},{v}): estimate {est} < {d}");
                    ensure!(est as f64 <= 16.0 * k as f64 * n2k * d as f64, "n={n} k={k} ({u},{v}): estimate {est}");
                    let p = s.query_path(u, v).map_err(|e| e.to_string())?;
                    let len = validate_path(&g, &p.vertices, u, v).map_err(|e| e.to_string())?.value();
                    let bound = 8.0 * k as f64 * n2k * d.max(1) as f64;
                    ensure!(len as f64 <= bound, "n={n} k={k} ({u},{v}): path {len} > {bound}");
                    worst = worst.max(len as f64 / d.max(1) as f64);
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs, zero violations, max path stretch {worst:.2}"))
}

fn criterion_4() -> Outcome {
    let mut checked = 0u64;
    for (i, g) in unweighted_family(20, 500, 4).into_iter().enumerate() {
        let p = 1 + i as u64 % 2;
        let h = hitting_set(&g, 2 * p).map_err(|e| e.to_string())?;
        for t in 1..=3 {
            let b = tz_build(&g, t, &h.members, i as u64).map_err(|e| e.to_string())?;
            for &u in &h.members {
                let d = bfs(&g, u);
                for &v in &h.members {
                    let w = find_witness(&b.store, u, v).ok_or(format!("no witness for ({u},{v})"))?;
                    ensure!(w.sum() <= (2 * t as u64 - 1) * d[v], "t={t} ({u},{v}): {} vs d={}", w.sum(), d[v]);
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} hitting-set pairs, zero violations"))
}

fn criterion_5() -> Outcome {
    let mut pairs = 0u64;
    let mut far = 0u64;
    let mut worst = 0.0f64;
    for (i, g) in unweighted_family(20, 300, 5).into_iter().enumerate() {
        let n = g.n();
        let fw = floyd_warshall(&g);
        let configs = [
            OracleParams { k: 2, p: 2, t: 2, s: 1 },
            OracleParams { k: 3, p: 2, t: 3, s: 1 },
            OracleParams { k: 2, p: 3, t: 1, s: 1 },
            OracleParams { k: 2, p: 2, t: 2, s: 3 },
            OracleParams { k: 3, p: 4, t: 3, s: 3 },
            OracleParams::from_epsilon(n, 2, 0.5).unwrap(),
            OracleParams::from_epsilon(n, 3, 1.0 / 3.0).unwrap(),
        ];
        for params in configs {
            let o = build_oracle(&g, params, i as u64).map_err(|e| e.to_string())?;
            for u in 0..n {
                for v in 0..n {
                    let tr = o.query_path_traced(u, v).map_err(|e| format!("graph {i} {params:?} ({u},{v}): {e}"))?;
                    let len = validate_path(&g, &tr.path.vertices, u, v).map_err(|e| e.to_string())?.value();
                    let d = fw[u][v];
                    ensure!(d <= len, "{params:?} ({u},{v}): {len} < {d}");
                    let env = params.envelope(n, d);
                    ensure!(len as f64 <= env, "{params:?} ({u},{v}): {len} > {env}");
                    worst = worst.max(len as f64 / env);
                    far += !tr.base_case as u64;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} queries ({far} through the skeleton), max length/envelope {worst:.4}"))
}

fn criterion_6() -> Outcome {
    let params = OracleParams { k: 2, p: 32, t: 2, s: 1 };
    let mut ratios = Vec::new();
    for seed in 0..5 {
        let g = generate(&GraphKind::Random { n: 1000, m: 5000, max_weight: 1 }, seed).map_err(|e| e.to_string())?;
        let r = build_oracle(&g, params, seed).map_err(|e| e.to_string())?.space_report();
        ratios.push(r.total_words as f64 / r.formula);
    }
    ratios.sort_by(f64::total_cmp);
    let median = ratios[2];
    let g = generate(&GraphKind::Random { n: 10_000, m: 50_000, max_weight: 1 }, 0).map_err(|e| e.to_string())?;
    let big = build_oracle(&g, params, 0).map_err(|e| e.to_string())?.space_report();
    println!("    n=10000 space report: {}", serde_json::to_string(&big).unwrap());
    ensure!(median <= 64.0, "median words/formula {median:.2}");
    Ok(format!(
        "median words/formula {median:.2} at n=1000; {:.2} at n=10000",
        big.total_words as f64 / big.formula
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let n = rng.gen_range(2..=400);
        let extra = if i % 2 == 0 { 0 } else { rng.gen_range(0..=n) };
        let g = connected(n, extra, 1, i);
        let r = rng.gen_range(1..=n.min(30)) as u64;
        let h = hitting_set(&g, r).map_err(|e| e.to_string())?;
        ensure!(h.len() as f64 <= 2.0 * n as f64 / r as f64, "graph {i}: |N| = {} for n={n} r={r}", h.len());
        for v in 0..n {
            let d = bfs(&g, v);
            ensure!(h.members.iter().any(|&x| d[x] <= r), "graph {i}: ball({v}, {r}) missed");
        }

        let tree = shortest_path_tree(&g, rng.gen_range(0..n), None).map_err(|e| e.to_string())?;
        let r = rng.gen_range(2..=n.clamp(2, 40)) as u64;
        let cut = tree_separator(&tree, r);
        let cap = (2 * tree.len() as u64).div_ceil(r);
        ensure!(cut.len() as u64 <= cap, "graph {i}: |R| = {} > {cap}", cut.len());
        // size of every piece left in the tree after removing the cut
        let is_cut = |v: usize| cut.binary_search(&v).is_ok();
        let mut piece = vec![0u64; n];
        for &v in tree.members() {
            if is_cut(v) {
                continue;
            }
            let mut top = v;
            while top != tree.root() && !is_cut(tree.parent_of(top).unwrap()) {
                top = tree.parent_of(top).unwrap();
            }
            piece[top] += 1;
        }
        let largest = piece.iter().copied().max().unwrap_or(0);
        ensure!(largest <= r, "graph {i}: piece of {largest} > {r}");
    }
    Ok("100 graphs, zero violations".into())
}

fn criterion_8() -> Outcome {
    let mut routes = 0u64;
    let mut worst = 0.0f64;
    for g in spread(20, 10, 300, 8, 8) {
        let n = g.n();
        let fw = floyd_warshall(&g);
        for k in 1..=2 {
            let r = build_routing(&g, k, false, 0).map_err(|e| e.to_string())?;
            let q = r.q() as usize;
            ensure!(r.max_table_records() <= 2 * k as usize * (q + 1) + q + 1, "table {}", r.max_table_records());
            ensure!(r.max_label_records() <= 2 * (q + 1), "label {}", r.max_label_records());
            let bound = 16.0 * k as f64 * (n as f64).powf(2.0 / k as f64);
            for u in 0..n {
                for v in 0..n {
                    let res = r.route_to(u, v).map_err(|e| e.to_string())?;
                    ensure!(res.delivered, "n={n} k={k}: {u} -> {v} not delivered");
                    let len = validate_path(&g, &res.path.vertices, u, v).map_err(|e| e.to_string())?.value();
                    let d = fw[u][v].max(1);
                    ensure!(len as f64 <= bound * d as f64, "n={n} k={k} ({u},{v}): {len}");
                    worst = worst.max(len as f64 / d as f64);
                    routes += 1;
                }
            }
        }
    }
    Ok(format!("{routes} routes delivered, max stretch {worst:.2}"))
}

fn criterion_9() -> Outcome {
    let g = generate(&GraphKind::Random { n: 10_000, m: 50_000, max_weight: 1 }, 9).map_err(|e| e.to_string())?;
    let entry = OracleParams::from_epsilon(g.n(), 3, 1.0).unwrap();
    let mut lines = Vec::new();
    for params in [entry, OracleParams { p: 1, ..entry }] {
        let start = Instant::now();
        let o = build_oracle(&g, params, 9).map_err(|e| e.to_string())?;
        let build = start.elapsed().as_secs_f64();
        ensure!(build < 60.0, "{params:?}: build took {build:.1}s");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (mut witness_ns, mut path_ns, mut far) = (0u64, 0u64, 0);
        for _ in 0..10_000 {
            let (u, v) = (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()));
            let tr = o.query_path_traced(u, v).map_err(|e| e.to_string())?;
            witness_ns += tr.witness_ns;
            path_ns += tr.path_ns;
            far += !tr.base_case as usize;
        }
        ensure!(witness_ns <= path_ns, "{params:?}: witness {witness_ns}ns > path {path_ns}ns");
        lines.push(format!(
            "p={} build {build:.2}s, witness {:.1}ms / path {:.1}ms over 10^4 queries ({far} via skeleton)",
            params.p,
            witness_ns as f64 / 1e6,
            path_ns as f64 / 1e6
        ));
    }
    // informational: a long-diameter graph where queries leave the base case
    let grid = generate(&GraphKind::Grid { rows: 100, cols: 100 }, 0).map_err(|e| e.to_string())?;
    let params = OracleParams { p: 1, ..entry };
    let o = build_oracle(&grid, params, 9).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut witness_ns, mut path_ns, mut far) = (0u64, 0u64, 0);
    for _ in 0..10_000 {
        let tr = o.query_path_traced(rng.gen_range(0..10_000), rng.gen_range(0..10_000)).map_err(|e| e.to_string())?;
        witness_ns += tr.witness_ns;
        path_ns += tr.path_ns;
        far += !tr.base_case as usize;
    }
    println!(
        "    100x100 grid, p={}: witness {:.1}ms / path {:.1}ms, {far} of 10^4 via skeleton",
        params.p,
        witness_ns as f64 / 1e6,
        path_ns as f64 / 1e6
    );
    Ok(lines.join("; "))
}

fn same_answers<T: serial::Document>(original: &T, text: &str, check: impl Fn(&T, &T) -> Result<(), String>) -> Outcome {
    let again: T = serial::from_json(text).map_err(|e| e.to_string())?;
    ensure!(serial::to_json(&again) == text, "re-serialization differs");
    check(original, &again)?;
    Ok(String::new())
}

fn criterion_10() -> Outcome {
    let g = connected(300, 400, 1, 10);
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let queries: Vec<(usize, usize)> = (0..1000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();

    let cover = |seed| build_cover_randomized_with_retries(&g, Radius::integer(3), 2, seed, 32).unwrap();
    let text = serial::to_json(&cover(5));
    ensure!(text == serial::to_json(&cover(5)), "cover differs between builds");
    same_answers::<SparseCover>(&cover(5), &text, |a, b| {
        ensure!((0..n).all(|v| a.padded(v) == b.padded(v) && a.membership(v) == b.membership(v)), "cover answers");
        Ok(())
    })?;

    let lab = |seed| build_labeling(&g, 2, true, seed).unwrap();
    let text = serial::to_json(&lab(5));
    ensure!(text == serial::to_json(&lab(5)), "labeling differs between builds");
    same_answers::<LabelingScheme>(&lab(5), &text, |a, b| {
        for &(u, v) in &queries {
            ensure!(a.query_distance(u, v) == b.query_distance(u, v), "labeling distance ({u},{v})");
            ensure!(a.query_path(u, v) == b.query_path(u, v), "labeling path ({u},{v})");
        }
        Ok(())
    })?;

    let params = OracleParams { k: 2, p: 2, t: 2, s: 2 };
    let text = serial::to_json(&build_oracle(&g, params, 5).unwrap());
    ensure!(text == serial::to_json(&build_oracle(&g, params, 5).unwrap()), "oracle differs between builds");
    same_answers::<PrunedOracle>(&build_oracle(&g, params, 5).unwrap(), &text, |a, b| {
        for &(u, v) in &queries {
            ensure!(a.query_path(u, v) == b.query_path(u, v), "oracle path ({u},{v})");
        }
        Ok(())
    })?;

    let text = serial::to_json(&build_routing(&g, 2, true, 5).unwrap());
    ensure!(text == serial::to_json(&build_routing(&g, 2, true, 5).unwrap()), "routing differs between builds");
    same_answers::<RoutingScheme>(&build_routing(&g, 2, true, 5).unwrap(), &text, |a, b| {
        for &(u, v) in &queries {
            ensure!(a.route_to(u, v) == b.route_to(u, v), "route ({u},{v})");
        }
        Ok(())
    })?;
    Ok("cover, labeling, oracle and routing: byte-identical rebuilds, 1000 identical answers after reload".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("deterministic cover exactness", criterion_1),
        ("randomized cover", criterion_2),
        ("labeling stretch", criterion_3),
        ("witness inequality", criterion_4),
        ("oracle stretch envelope", criterion_5),
        ("space accounting", criterion_6),
        ("hitting set and tree separator", criterion_7),
        ("routing", criterion_8),
        ("scale and query time split", criterion_9),
        ("determinism and round-trip", criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    let _ = INF;
}
