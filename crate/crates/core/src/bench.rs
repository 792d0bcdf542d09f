//! Stretch, space and timing experiments over random query pairs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::labeling::{build_labeling, LabelingScheme};
use crate::oracle::{build_oracle, OracleParams, PrunedOracle};
use crate::path::validate_path;
use crate::rng::{self, Stream};
use crate::routing::{routing_from_labeling, RoutingScheme};
use crate::sssp::distances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "structure", rename_all = "lowercase")]
pub enum Structure {
    Labeling { k: u32, randomized: bool },
    Oracle(OracleParams),
    Routing { k: u32, randomized: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Queries {
    Sample(usize),
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub structure: Structure,
    pub seed: u64,
    pub queries: Queries,
    /// Adds per-query nanoseconds to the rows.
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        match self.structure {
            Structure::Labeling { k, .. } | Structure::Routing { k, .. } if k == 0 => {
                Err(Error::InvalidParameter("k must be at least 1".into()))
            }
            Structure::Oracle(p) => {
                p.validate()?;
                if !g.is_unit_weighted() {
                    return Err(Error::WeightedInput);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub u: VertexId,
    pub v: VertexId,
    pub d_exact: u64,
    pub d_reported: u64,
    pub path_length: u64,
    pub stretch: f64,
    pub query_ns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub queries: usize,
    pub max_stretch: f64,
    pub median_stretch: f64,
    pub space_words: usize,
    pub build_ms: f64,
    /// Tightest stretch allowed by the structure's guarantee over the sampled
    /// pairs.
    pub bound_envelope: f64,
    pub bound_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<ExperimentRow>,
    pub summary: BenchSummary,
    timings: bool,
}

enum Built {
    Labeling(LabelingScheme),
    Oracle(PrunedOracle),
    Routing(RoutingScheme),
}

impl Built {
    fn space_words(&self) -> usize {
        match self {
            Built::Labeling(s) => s.labels().iter().map(|l| l.words()).sum(),
            Built::Oracle(o) => o.space_report().total_words,
            Built::Routing(r) => (0..r.n()).map(|v| 5 * r.table(v).entries.len() + 4 * r.label(v).scales.len()).sum(),
        }
    }

    /// Largest path length allowed for a pair at distance `d`.
    fn allowed_length(&self, d: u64) -> f64 {
        match self {
            Built::Labeling(s) => s.path_stretch_bound() * d.max(1) as f64,
            Built::Oracle(o) => o.envelope(d),
            Built::Routing(r) => r.path_stretch_bound() * d.max(1) as f64,
        }
    }
}

fn sample_pairs(n: usize, seed: u64, queries: Queries) -> Vec<(VertexId, VertexId)> {
    match queries {
        Queries::AllPairs => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        Queries::Sample(q) if n > 0 => {
            let mut rng = rng::stream(seed, Stream::PairSampling);
            (0..q).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        }
        Queries::Sample(_) => Vec::new(),
    }
}

/// Builds the configured structure and answers the sampled pairs, checking
/// every path against the graph and every length against the structure's
/// guarantee. The graph must be connected.
pub fn run_bench(g: &Graph, config: &ExperimentConfig) -> Result<BenchReport> {
    config.validate(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let start = Instant::now();
    let built = match config.structure {
        Structure::Labeling { k, randomized } => Built::Labeling(build_labeling(g, k, randomized, config.seed)?),
        Structure::Oracle(p) => Built::Oracle(build_oracle(g, p, config.seed)?),
        Structure::Routing { k, randomized } => {
            Built::Routing(routing_from_labeling(g, &build_labeling(g, k, randomized, config.seed)?))
        }
    };
    let build_ms = start.elapsed().as_secs_f64() * 1e3;

    let pairs = sample_pairs(g.n(), config.seed, config.queries);
    let mut exact: HashMap<VertexId, Vec<Dist>> = HashMap::new();
    let mut rows = Vec::with_capacity(pairs.len());
    let mut satisfied = true;
    let mut envelope = f64::INFINITY;
    for &(u, v) in &pairs {
        let d = exact.entry(u).or_insert_with(|| distances(g, u))[v].value();
        let start = Instant::now();
        let (reported, path) = match &built {
            Built::Labeling(s) => (s.query_distance(u, v)?, s.query_path(u, v)?),
            Built::Oracle(o) => {
                let p = o.query_path(u, v)?;
                (p.length, p)
            }
            Built::Routing(r) => {
                let res = r.route_to(u, v)?;
                satisfied &= res.delivered;
                (res.path.length, res.path)
            }
        };
        let ns = start.elapsed().as_nanos() as u64;
        let length = validate_path(g, &path.vertices, u, v)?.value();
        let allowed = built.allowed_length(d);
        satisfied &= d <= length && length as f64 <= allowed;
        if let Built::Labeling(s) = &built {
            satisfied &= d <= reported.value() && reported.as_f64() <= s.distance_stretch_bound() * d as f64;
        }
        envelope = envelope.min(allowed / d.max(1) as f64);
        rows.push(ExperimentRow {
            u,
            v,
            d_exact: d,
            d_reported: reported.value(),
            path_length: length,
            stretch: length as f64 / d.max(1) as f64,
            query_ns: Some(ns),
        });
    }
    if rows.is_empty() {
        envelope = built.allowed_length(1);
    }

    let mut stretches: Vec<f64> = rows.iter().map(|r| r.stretch).collect();
    stretches.sort_by(f64::total_cmp);
    let median = match stretches.len() {
        0 => 0.0,
        l if l % 2 == 1 => stretches[l / 2],
        l => (stretches[l / 2 - 1] + stretches[l / 2]) / 2.0,
    };
    let summary = BenchSummary {
        queries: rows.len(),
        max_stretch: stretches.last().copied().unwrap_or(0.0),
        median_stretch: median,
        space_words: built.space_words(),
        build_ms,
        bound_envelope: envelope,
        bound_satisfied: satisfied,
    };
    Ok(BenchReport { rows, summary, timings: config.timings })
}

impl BenchReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("u,v,d_exact,d_reported,path_length,stretch");
        out.push_str(if self.timings { ",query_ns\n" } else { "\n" });
        for r in &self.rows {
            write!(out, "{},{},{},{},{},{:.6}", r.u, r.v, r.d_exact, r.d_reported, r.path_length, r.stretch).unwrap();
            if self.timings {
                write!(out, ",{}", r.query_ns.unwrap_or(0)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Rows as a JSON array; `query_ns` is null unless timings were requested.
    pub fn rows_json(&self) -> String {
        let rows: Vec<ExperimentRow> = self
            .rows
            .iter()
            .map(|r| ExperimentRow { query_ns: r.query_ns.filter(|_| self.timings), ..r.clone() })
            .collect();
        serde_json::to_string(&rows).expect("rows serialize")
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string(&self.summary).expect("summary serializes")
    }
}
