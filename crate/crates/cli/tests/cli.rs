use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tradenet_core::io::{load_network, load_outcome};

fn tradenet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tradenet"))
        .args(args)
        .env_remove("TRADENET_BUDGET_BITS")
        .output()
        .expect("binary runs")
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = tradenet(&full);
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), report)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLE: &str = r#"{"vertices":["a","b","c"],"arcs":[["a","b"],["b","a"],["b","c"],["c","b"],["a","c"],["c","a"]]}"#;
const CYCLE: &str = r#"{"vertices":["a","b","c"],"arcs":[["a","b"],["b","c"],["c","a"]]}"#;

#[test]
fn partition_witness_is_blocking_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    let a_path = dir.path().join("empty.json");
    let out = tradenet(&["reduce", "partition", "--weights", "1,1,2", "--out", path(&net_path), "--outcome", path(&a_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let (code, report) = json_run(&["check", "--concept", "stable", path(&net_path), path(&a_path)]);
    assert_eq!(code, 3);
    assert_eq!(report["verdict"], "no");
    let witness = &report["witness"];
    assert_eq!(witness["type"], "block");

    // Replay the witness by hand against the core model.
    let net = load_network(&net_path).unwrap();
    let a = load_outcome(&a_path, &net).unwrap();
    let names: Vec<&str> = witness["contracts"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let block = net.outcome(&names).unwrap();
    assert!(!block.is_empty() && block.is_disjoint(&a));
    let evidence = witness["evidence"].as_array().unwrap();
    assert_eq!(evidence.len(), net.firms_of(&block).len());
    for fact in evidence {
        let firm = net.firm_id(fact["firm"].as_str().unwrap()).unwrap();
        let held: Vec<&str> = fact["contracts"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        let held = net.outcome(&held).unwrap();
        assert_eq!(held, net.restrict(firm, &block).unwrap());
        assert!(net.is_w_acceptable(&held, &a, firm).unwrap());
    }
}

#[test]
fn odd_partition_leaves_empty_outcome_stable() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    let a_path = dir.path().join("empty.json");
    tradenet(&["reduce", "partition", "--weights", "1,2", "--out", path(&net_path), "--outcome", path(&a_path)]);
    let (code, report) = json_run(&["check", "--concept", "stable", path(&net_path), path(&a_path)]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "yes");
}

#[test]
fn bipartition_reductions() {
    let dir = tempfile::tempdir().unwrap();
    for (text, expected) in [(TRIANGLE, 3), (CYCLE, 0)] {
        let d = dir.path().join("d.json");
        std::fs::write(&d, text).unwrap();
        let net_path = dir.path().join("net.json");
        let map_path = dir.path().join("map.json");
        let out = tradenet(&["reduce", "acyclic-bipartition", path(&d), "--out", path(&net_path), "--map", path(&map_path)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(map_path.exists());
        let witness = dir.path().join("a.json");
        let (code, _) = json_run(&["exists", "--concept", "pc", path(&net_path), "--out", path(&witness)]);
        assert_eq!(code, expected);
        if expected == 0 {
            let (code, _) = json_run(&["check", "--concept", "pc", path(&net_path), path(&witness)]);
            assert_eq!(code, 0);
        }
    }
}

#[test]
fn solve_then_check_trail() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    let out = tradenet(&["gen", "flow", "--seed", "11", "--firms", "8", "--density", "0.35", "--out", path(&net_path)]);
    assert_eq!(out.status.code(), Some(0));
    let a_path = dir.path().join("a.json");
    let (code, report) = json_run(&["solve", path(&net_path), "--out", path(&a_path)]);
    assert_eq!(code, 0);
    assert!(report["counters"]["rounds"].as_u64().unwrap() >= 1);
    for concept in ["trail", "weak-trail"] {
        let (code, _) = json_run(&["check", "--concept", concept, path(&net_path), path(&a_path)]);
        assert_eq!(code, 0, "{concept}");
    }
}

#[test]
fn generator_prints_to_stdout_deterministically() {
    let a = tradenet(&["gen", "flow", "--seed", "3", "--firms", "6", "--density", "0.5"]);
    let b = tradenet(&["gen", "flow", "--seed", "3", "--firms", "6", "--density", "0.5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["schema_version"], 1);
}

#[test]
fn export_dot_marks_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    let a_path = dir.path().join("a.json");
    tradenet(&["reduce", "partition", "--weights", "1,1,2", "--out", path(&net_path)]);
    tradenet(&["solve", path(&net_path), "--out", path(&a_path)]);
    let out = tradenet(&["export-dot", path(&net_path), "--outcome", path(&a_path)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph trading_network {"));
    assert_eq!(text.matches("->").count(), 4);
    assert!(text.contains("style=solid"));
}

#[test]
fn oracle_experiment_reports_query_counts() {
    for (n, needed) in [(1, 2), (2, 6), (3, 20)] {
        let (code, report) = json_run(&["experiment", "oracle-calls", "--n", &n.to_string()]);
        assert_eq!(code, 0);
        assert_eq!(report["details"]["queries_needed"], needed);
    }
}

#[test]
fn audits() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    tradenet(&["gen", "flow", "--seed", "5", "--firms", "6", "--density", "0.4", "--out", path(&net_path)]);
    for property in ["irc", "full-sub"] {
        let (code, _) = json_run(&["audit", "--property", property, path(&net_path)]);
        assert_eq!(code, 0, "{property}");
    }
    let table = r#"{"schema_version":1,
      "firms":[{"id":"a","choice":{"kind":"terminal"}},
               {"id":"f","choice":{"kind":"table","entries":[
                 {"offered":[],"chosen":[]},{"offered":["x"],"chosen":[]},
                 {"offered":["y"],"chosen":[]},{"offered":["x","y"],"chosen":["x","y"]}]}}],
      "contracts":[{"id":"x","seller":"a","buyer":"f"},{"id":"y","seller":"a","buyer":"f"}]}"#;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, table).unwrap();
    let (code, report) = json_run(&["audit", "--property", "full-sub", path(&bad), "--firm", "f"]);
    assert_eq!(code, 3, "{report}");
    assert_eq!(report["witness"]["type"], "violations");
    let (code, _) = json_run(&["audit", "--property", "irc", path(&bad), "--cap", "1"]);
    assert_eq!(code, 4);
}

#[test]
fn budget_exhaustion_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    std::fs::write(&d, TRIANGLE).unwrap();
    let net_path = dir.path().join("net.json");
    tradenet(&["reduce", "acyclic-bipartition", path(&d), "--out", path(&net_path)]);
    let (code, report) = json_run(&["--budget-bits", "4", "exists", "--concept", "pc", path(&net_path)]);
    assert_eq!(code, 4);
    assert_eq!(report["verdict"], "unknown-budget");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("net.json");
    tradenet(&["reduce", "partition", "--weights", "1,1,2", "--out", path(&net_path)]);
    let bad_version = dir.path().join("v.json");
    std::fs::write(&bad_version, r#"{"schema_version": 2, "contracts": []}"#).unwrap();
    let unknown = dir.path().join("u.json");
    std::fs::write(&unknown, r#"{"schema_version": 1, "contracts": ["nope"]}"#).unwrap();
    let malformed = dir.path().join("m.json");
    std::fs::write(&malformed, "{").unwrap();
    for outcome in [&bad_version, &unknown, &malformed] {
        let out = tradenet(&["check", "--concept", "trail", path(&net_path), path(outcome)]);
        assert_eq!(out.status.code(), Some(2));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(tradenet(&["solve", path(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(tradenet(&["check", "--concept", "nonsense", path(&net_path), path(&net_path)]).status.code(), Some(2));
    assert_eq!(tradenet(&["reduce", "partition", "--weights", "0,1", "--out", path(&net_path)]).status.code(), Some(2));
}
