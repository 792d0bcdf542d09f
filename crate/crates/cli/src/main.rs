use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pathcover::bench::{run_bench, ExperimentConfig, Queries, Structure};
use pathcover::cover::{build_cover_deterministic, build_cover_randomized_with_retries, verify_cover, SparseCover};
use pathcover::labeling::{build_labeling, LabelingScheme, DEFAULT_RETRIES};
use pathcover::oracle::{build_oracle, OracleParams, PrunedOracle};
use pathcover::routing::{build_routing, RoutingScheme};
use pathcover::serial::{self, document_kind};
use pathcover::{generate, Graph, GraphKind, Radius};

/// Sparse covers, distance labels, path-reporting oracles and compact routing.
#[derive(Parser)]
#[command(name = "pathcover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a sparse cover and report its quality.
    Cover {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        build: BuildArgs,
        /// Ball radius; may be fractional.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a distance labeling scheme.
    Label {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        build: BuildArgs,
        /// Answer one query, given as `u,v`.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the path-reporting oracle (unweighted graphs).
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build routing tables and route messages.
    Route {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        build: BuildArgs,
        /// Route one message and print its hop trace.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
        /// Otherwise route this many random pairs.
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Measure stretch, space and build time on random pairs.
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = StructureArg::Labeling)]
        structure: StructureArg,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        randomized: bool,
        /// Number of random pairs, or `all`.
        #[arg(long, default_value = "1000", value_parser = parse_queries)]
        queries: Queries,
        /// Include per-query nanoseconds in the rows.
        #[arg(long)]
        timings: bool,
        /// Where to write the rows; the summary goes to stdout.
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build every structure and check all guarantees; exits non-zero on failure.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value = "200", value_parser = parse_queries)]
        queries: Queries,
        /// Also load and check a saved document.
        #[arg(long)]
        document: Option<PathBuf>,
    },
    /// Convert a graph or a saved document to CSV or canonical JSON.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file (`n m` header, then `u v w` lines) or graph document.
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Vertices; rows for grids.
    #[arg(long)]
    n: Option<usize>,
    /// Edges; columns for grids.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    max_weight: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Use padded random partitions instead of region growing.
    #[arg(long)]
    randomized: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Hop length; defaults to ceil(n^{1/k}).
    #[arg(long)]
    p: Option<u64>,
    /// Sampling levels; defaults to k.
    #[arg(long)]
    t: Option<u32>,
    /// Number of gap covers.
    #[arg(long)]
    s: Option<u32>,
    /// Sets t = k, p = ceil(n^{1/k}) and s = ceil(1/eps); explicit flags win.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Path,
    Cycle,
    Grid,
    Star,
    Random,
    Sparse,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    Labeling,
    Oracle,
    Routing,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected u,v")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn parse_queries(s: &str) -> std::result::Result<Queries, String> {
    if s == "all" {
        return Ok(Queries::AllPairs);
    }
    s.parse().map(Queries::Sample).map_err(|e| format!("{e}"))
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return read_graph(&text).with_context(|| format!("loading {}", path.display()));
        }
        let kind = self.kind.ok_or_else(|| anyhow!("give --input or --kind"))?;
        let n = self.n.ok_or_else(|| anyhow!("--kind needs --n"))?;
        let kind = match kind {
            KindArg::Path => GraphKind::Path { n },
            KindArg::Cycle => GraphKind::Cycle { n },
            KindArg::Grid => GraphKind::Grid { rows: n, cols: self.m.unwrap_or(n) },
            KindArg::Star => GraphKind::Star { n },
            KindArg::Random => {
                GraphKind::Random { n, m: self.m.unwrap_or(2 * n), max_weight: self.max_weight }
            }
            KindArg::Sparse => {
                let extra = self.m.unwrap_or(2 * n).saturating_sub(n.saturating_sub(1));
                GraphKind::Sparse { n, extra, max_weight: self.max_weight }
            }
        };
        Ok(generate(&kind, self.seed)?)
    }
}

fn read_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        Ok(serial::from_json(text)?)
    } else {
        Ok(Graph::parse(text)?)
    }
}

impl OracleArgs {
    fn params(&self, n: usize) -> Result<OracleParams> {
        let mut p = OracleParams::from_epsilon(n, self.k, self.eps.unwrap_or(1.0))?;
        p.p = self.p.unwrap_or(p.p);
        p.t = self.t.unwrap_or(p.t);
        p.s = self.s.unwrap_or(p.s);
        p.validate()?;
        Ok(p)
    }
}

impl OutArgs {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Writes the document to `--out`, if given.
    fn save(&self, doc: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, doc).with_context(|| format!("writing {}", path.display())),
            None => Ok(()),
        }
    }
}

fn graph_csv(g: &Graph) -> String {
    let mut out = String::from("u,v,w\n");
    for e in g.edges() {
        writeln!(out, "{},{},{}", e.u, e.v, e.w).unwrap();
    }
    out
}

fn cover_csv(c: &SparseCover) -> String {
    let mut out = String::from("cluster,v,parent,dist\n");
    for t in c.clusters() {
        for (v, p, d) in t.records() {
            writeln!(out, "{},{v},{p},{d}", t.id()).unwrap();
        }
    }
    out
}

fn labeling_csv(s: &LabelingScheme) -> String {
    let mut out = String::from("v,tree,parent,dist_to_root,padded_scale\n");
    for l in s.labels() {
        let mut trees: Vec<_> = l.trees.iter().collect();
        trees.sort_unstable_by_key(|e| e.0);
        for (&id, r) in trees {
            let scale = l.padded.iter().position(|&p| p == id).map(|i| i.to_string()).unwrap_or_default();
            writeln!(out, "{},{id},{},{},{scale}", l.v, r.parent, r.dist_to_root).unwrap();
        }
    }
    out
}

fn routing_csv(r: &RoutingScheme) -> String {
    let mut out = String::from("v,tree,lo,hi,parent,dist\n");
    for v in 0..r.n() {
        for e in &r.table(v).entries {
            writeln!(out, "{v},{},{},{},{},{}", e.tree, e.interval.lo, e.interval.hi, e.parent, e.dist).unwrap();
        }
    }
    out
}

fn export(input: &PathBuf, out: &OutArgs) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let format = out.format.unwrap_or(Format::Json);
    if !text.trim_start().starts_with('{') {
        let g = Graph::parse(&text)?;
        return out.write(&match format {
            Format::Csv => graph_csv(&g),
            Format::Json => serial::to_json(&g) + "\n",
        });
    }
    let kind = document_kind(&text)?;
    let rendered = match (kind.as_str(), format) {
        ("graph", f) => {
            let g: Graph = serial::from_json(&text)?;
            if f == Format::Csv { graph_csv(&g) } else { serial::to_json(&g) + "\n" }
        }
        ("cover", f) => {
            let c: SparseCover = serial::from_json(&text)?;
            if f == Format::Csv { cover_csv(&c) } else { serial::to_json(&c) + "\n" }
        }
        ("labeling", f) => {
            let s: LabelingScheme = serial::from_json(&text)?;
            if f == Format::Csv { labeling_csv(&s) } else { serial::to_json(&s) + "\n" }
        }
        ("routing", f) => {
            let r: RoutingScheme = serial::from_json(&text)?;
            if f == Format::Csv { routing_csv(&r) } else { serial::to_json(&r) + "\n" }
        }
        ("oracle", Format::Json) => serial::to_json(&serial::from_json::<PrunedOracle>(&text)?) + "\n",
        ("oracle", Format::Csv) => bail!("oracle documents export to json only"),
        (other, _) => bail!("unknown document kind {other:?}"),
    };
    out.write(&rendered)
}

/// Prints one line per check and returns whether all passed.
struct Checks {
    ok: bool,
}

impl Checks {
    fn record(&mut self, name: &str, pass: bool, detail: impl std::fmt::Display) {
        println!("{} {name}: {detail}", if pass { "ok  " } else { "FAIL" });
        self.ok &= pass;
    }
}

fn verify(graph: &GraphArgs, oracle: &OracleArgs, rho: f64, queries: Queries, document: Option<&PathBuf>) -> Result<bool> {
    let g = graph.load()?;
    let k = oracle.k;
    let rho = Radius::from_f64(rho)?;
    let mut checks = Checks { ok: true };

    let det = build_cover_deterministic(&g, rho, k)?;
    let st = verify_cover(&g, &det);
    checks.record("deterministic cover", st.is_valid_for(&det) && det.stats().phases <= 2 * k, json!(st));
    let rand = build_cover_randomized_with_retries(&g, rho, k, graph.seed, DEFAULT_RETRIES)?;
    let st = verify_cover(&g, &rand);
    checks.record("randomized cover", st.is_valid_for(&rand), json!(st));

    if g.is_connected() {
        let mut run = |name: &str, structure| -> Result<()> {
            let cfg = ExperimentConfig { structure, seed: graph.seed, queries, timings: false };
            let r = run_bench(&g, &cfg)?;
            checks.record(name, r.summary.bound_satisfied, json!(r.summary));
            Ok(())
        };
        run("labeling", Structure::Labeling { k, randomized: false })?;
        run("routing", Structure::Routing { k, randomized: false })?;
        if g.is_unit_weighted() {
            run("oracle", Structure::Oracle(oracle.params(g.n())?))?;
        } else {
            println!("skip oracle: weighted graph");
        }
    } else {
        println!("skip labeling, routing, oracle: graph is disconnected");
    }

    if let Some(path) = document {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let kind = document_kind(&text)?;
        let loaded = match kind.as_str() {
            "graph" => serial::from_json::<Graph>(&text).map(|x| x == g),
            "cover" => serial::from_json::<SparseCover>(&text).map(|c| verify_cover(&g, &c).is_valid_for(&c)),
            "labeling" => serial::from_json::<LabelingScheme>(&text).map(|s| s.n() == g.n()),
            "oracle" => serial::from_json::<PrunedOracle>(&text).map(|o| o.n() == g.n()),
            "routing" => serial::from_json::<RoutingScheme>(&text).map(|r| r.n() == g.n()),
            other => bail!("unknown document kind {other:?}"),
        };
        match loaded {
            Ok(pass) => checks.record(&format!("{kind} document"), pass, path.display()),
            Err(e) => checks.record(&format!("{kind} document"), false, e),
        }
    }
    Ok(checks.ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { graph, out } => {
            let g = graph.load()?;
            out.write(&match out.format {
                None => g.to_edge_list(),
                Some(Format::Csv) => graph_csv(&g),
                Some(Format::Json) => serial::to_json(&g) + "\n",
            })?;
        }
        Command::Cover { graph, build, rho, out } => {
            let g = graph.load()?;
            let rho = Radius::from_f64(rho)?;
            let cover = if build.randomized {
                build_cover_randomized_with_retries(&g, rho, build.k, graph.seed, DEFAULT_RETRIES)?
            } else {
                build_cover_deterministic(&g, rho, build.k)?
            };
            let st = verify_cover(&g, &cover);
            let valid = st.is_valid_for(&cover);
            out.save(&match out.format {
                Some(Format::Csv) => cover_csv(&cover),
                _ => serial::to_json(&cover) + "\n",
            })?;
            let report = json!({
                "clusters": st.clusters,
                "max_diameter": st.max_diameter,
                "diameter_bound": cover.beta() * cover.rho().value(),
                "max_overlap": st.max_overlap,
                "unpadded_count": st.unpadded_count,
                "stats": cover.stats(),
                "valid": valid,
            });
            println!("{report}");
            return Ok(valid);
        }
        Command::Label { graph, build, pair, out } => {
            let g = graph.load()?;
            let s = build_labeling(&g, build.k, build.randomized, graph.seed)?;
            out.save(&match out.format {
                Some(Format::Csv) => labeling_csv(&s),
                _ => serial::to_json(&s) + "\n",
            })?;
            let max_records = s.labels().iter().map(|l| l.record_count()).max().unwrap_or(0);
            let mut report = json!({
                "n": s.n(),
                "q": s.q(),
                "max_label_records": max_records,
                "total_label_words": s.labels().iter().map(|l| l.words()).sum::<usize>(),
            });
            if let Some((u, v)) = pair {
                let path = s.query_path(u, v)?;
                report["query"] = json!({
                    "u": u,
                    "v": v,
                    "distance": s.query_distance(u, v)?.value(),
                    "path": path.vertices,
                    "length": path.length.value(),
                });
            }
            println!("{report}");
        }
        Command::Oracle { graph, oracle, pair, out } => {
            let g = graph.load()?;
            let params = oracle.params(g.n())?;
            let o = build_oracle(&g, params, graph.seed)?;
            if out.format == Some(Format::Csv) {
                bail!("oracle documents are written as json only");
            }
            out.save(&(serial::to_json(&o) + "\n"))?;
            let mut report = json!({ "params": params, "space": o.space_report() });
            if let Some((u, v)) = pair {
                let tr = o.query_path_traced(u, v)?;
                report["query"] = json!({
                    "u": u,
                    "v": v,
                    "path": tr.path.vertices,
                    "length": tr.path.length.value(),
                    "base_case": tr.base_case,
                    "witness": tr.witness.map(|w| w.w),
                });
            }
            println!("{report}");
        }
        Command::Route { graph, build, pair, queries, out } => {
            let g = graph.load()?;
            let r = build_routing(&g, build.k, build.randomized, graph.seed)?;
            out.save(&match out.format {
                Some(Format::Csv) => routing_csv(&r),
                _ => serial::to_json(&r) + "\n",
            })?;
            if let Some((u, v)) = pair {
                let res = r.route_to(u, v)?;
                print!("{}", res.trace_lines());
                println!("{}", res.to_json());
                return Ok(res.delivered);
            }
            let cfg = ExperimentConfig {
                structure: Structure::Routing { k: build.k, randomized: build.randomized },
                seed: graph.seed,
                queries: Queries::Sample(queries),
                timings: false,
            };
            let report = run_bench(&g, &cfg)?;
            println!(
                "{}",
                json!({
                    "max_table_records": r.max_table_records(),
                    "max_label_records": r.max_label_records(),
                    "summary": report.summary,
                })
            );
            return Ok(report.summary.bound_satisfied);
        }
        Command::Bench { graph, structure, oracle, randomized, queries, timings, out } => {
            let g = graph.load()?;
            let structure = match structure {
                StructureArg::Labeling => Structure::Labeling { k: oracle.k, randomized },
                StructureArg::Routing => Structure::Routing { k: oracle.k, randomized },
                StructureArg::Oracle => Structure::Oracle(oracle.params(g.n())?),
            };
            let cfg = ExperimentConfig { structure, seed: graph.seed, queries, timings };
            let report = run_bench(&g, &cfg)?;
            let rows = match out.format {
                Some(Format::Json) => report.rows_json() + "\n",
                _ => report.csv(),
            };
            match &out.out {
                Some(path) => {
                    fs::write(path, rows).with_context(|| format!("writing {}", path.display()))?;
                    println!("{}", report.summary_json());
                }
                None => {
                    print!("{rows}");
                    eprintln!("{}", report.summary_json());
                }
            }
            return Ok(report.summary.bound_satisfied);
        }
        Command::Verify { graph, oracle, rho, queries, document } => {
            return verify(&graph, &oracle, rho, queries, document.as_ref());
        }
        Command::Export { input, out } => export(&input, &out)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
