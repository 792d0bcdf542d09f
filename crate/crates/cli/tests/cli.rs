use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pathcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathcover")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = pathcover(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn last_json(stdout: &str) -> Value {
    serde_json::from_str(stdout.lines().last().unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SPARSE: [&str; 8] = ["--kind", "sparse", "--n", "60", "--m", "90", "--seed", "3"];

#[test]
fn gen_is_deterministic_and_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    let a = ok(&[&["gen"][..], &SPARSE, &["--max-weight", "5"]].concat());
    let b = ok(&[&["gen"][..], &SPARSE, &["--max-weight", "5"]].concat());
    assert_eq!(a, b);
    fs::write(&edges, &a).unwrap();
    let json = ok(&["gen", "--input", p(&edges), "--format", "json"]);
    let doc: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["kind"], "graph");
    assert_eq!(doc["format_version"], 1);
}

#[test]
fn cover_reports_a_valid_cover() {
    for extra in [&[][..], &["--randomized"][..]] {
        let out = ok(&[&["cover", "--k", "2", "--rho", "2.5"][..], &SPARSE, extra].concat());
        let report = last_json(&out);
        assert_eq!(report["valid"], true);
        assert_eq!(report["unpadded_count"], 0);
        assert!(report["max_overlap"].as_u64().unwrap() <= 4);
    }
}

#[test]
fn label_answers_a_pair() {
    let out = ok(&[&["label", "--k", "2", "--pair", "0,59"][..], &SPARSE].concat());
    let q = &last_json(&out)["query"];
    let path = q["path"].as_array().unwrap();
    assert_eq!(path.first().unwrap(), 0);
    assert_eq!(path.last().unwrap(), 59);
    assert!(q["distance"].as_u64().unwrap() >= 1);
}

#[test]
fn oracle_answers_a_pair() {
    let out = ok(&["oracle", "--kind", "grid", "--n", "12", "--k", "2", "--p", "2", "--t", "2", "--pair", "0,143"]);
    let report = last_json(&out);
    let q = &report["query"];
    assert_eq!(q["path"].as_array().unwrap().last().unwrap(), 143);
    assert!(q["length"].as_u64().unwrap() >= 22);
    assert!(report["space"]["total_words"].as_u64().unwrap() > 0);
}

#[test]
fn route_prints_a_trace() {
    let out = ok(&[&["route", "--k", "2", "--pair", "5,40"][..], &SPARSE].concat());
    assert!(out.lines().next().unwrap().starts_with("step"));
    let done = last_json(&out);
    assert_eq!(done["delivered"], true);

    let summary = last_json(&ok(&[&["route", "--k", "2", "--queries", "50"][..], &SPARSE].concat()));
    assert_eq!(summary["summary"]["bound_satisfied"], true);
}

#[test]
fn bench_rows_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for (file, structure) in [(&a, "labeling"), (&b, "labeling")] {
        let out = ok(&[&["bench", "--structure", structure, "--queries", "40", "--out", p(file)][..], &SPARSE].concat());
        assert_eq!(last_json(&out)["bound_satisfied"], true);
    }
    let rows = fs::read_to_string(&a).unwrap();
    assert_eq!(rows, fs::read_to_string(&b).unwrap());
    assert_eq!(rows.lines().count(), 41);
    assert!(!rows.lines().next().unwrap().contains("query_ns"));

    let timed = ok(&[&["bench", "--structure", "oracle", "--queries", "all", "--timings"][..], &["--kind", "cycle", "--n", "30"]].concat());
    assert!(timed.lines().next().unwrap().contains("query_ns"));
    assert_eq!(timed.lines().count(), 1 + 30 * 29 / 2);
}

#[test]
fn verify_passes_and_checks_documents() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("labels.json");
    ok(&[&["label", "--out", p(&doc)][..], &SPARSE].concat());
    let out = ok(&[&["verify", "--queries", "50", "--document", p(&doc)][..], &SPARSE].concat());
    assert!(out.lines().all(|l| l.starts_with("ok")), "{out}");

    // a document built for a different graph fails its check with exit code 2
    let other = pathcover(&["verify", "--kind", "path", "--n", "10", "--queries", "10", "--document", p(&doc)]);
    assert_eq!(other.status.code(), Some(2));
}

#[test]
fn export_round_trips_and_rejects_damage() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("routing.json");
    ok(&[&["route", "--queries", "1", "--out", p(&doc)][..], &SPARSE].concat());
    let text = fs::read_to_string(&doc).unwrap();
    assert_eq!(ok(&["export", "--input", p(&doc), "--format", "json"]), text);
    let csv = ok(&["export", "--input", p(&doc), "--format", "csv"]);
    assert!(csv.lines().count() > 60);

    let cut = dir.path().join("cut.json");
    fs::write(&cut, &text[..text.len() / 2]).unwrap();
    let out = pathcover(&["export", "--input", p(&cut), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn bad_arguments_are_errors() {
    assert_eq!(pathcover(&["label", "--kind", "path", "--n", "5", "--k", "0"]).status.code(), Some(1));
    assert_eq!(pathcover(&["oracle", "--kind", "sparse", "--n", "20", "--m", "30", "--max-weight", "4"]).status.code(), Some(1));
    assert_ne!(pathcover(&["label", "--pair", "1"]).status.code(), Some(0));
}
