use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn smallprog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallprog")).args(args).output().expect("binary runs")
}

fn envelope(args: &[&str]) -> Value {
    let out = smallprog(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn envelope_shape() {
    let v = envelope(&["games", "classical", "--game", "chsh"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["tool_version", "config", "seed", "result", "wall_time"]);
    assert_eq!(v["result"]["value"]["exact"], "3/4");
    assert!(v["wall_time"].is_null());
    let timed = envelope(&["--timing", "games", "ghz"]);
    assert!(timed["wall_time"].is_f64());
}

#[test]
fn chsh_reports_the_closed_form() {
    let v = envelope(&["games", "chsh"]);
    assert_eq!(v["result"]["closed_form"], "(5+sqrt(2))/8");
    let s = v["result"]["quantum"]["success"].as_f64().unwrap();
    assert!((s - (5.0 + 2f64.sqrt()) / 8.0).abs() < 1e-9);
    let v = envelope(&["games", "chsh", "--angles", "0", "0"]);
    assert!((v["result"]["quantum"]["success"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert!(v["result"]["closed_form"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(smallprog(&["tm", "bb", "--states", "7", "--symbols", "2"]).status.code(), Some(1));
    let out = smallprog(&["tm", "bb", "--states", "7", "--symbols", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert_eq!(smallprog(&["ca", "run", "--rule", "256", "--width", "5", "--steps", "1"]).status.code(), Some(1));
    assert_eq!(smallprog(&["ca", "fly"]).status.code(), Some(2));
    assert_eq!(smallprog(&["ca", "run", "--rule", "110"]).status.code(), Some(2));
    assert_eq!(smallprog(&["ca", "run", "--rule", "30", "--width", "3", "--steps", "1", "--init", "0x1"]).status.code(), Some(2));
    assert_eq!(smallprog(&["games", "ghz", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(smallprog(&["causal", "generate", "--kind", "prism:2"]).status.code(), Some(2));
}

#[test]
fn ca_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("out.pgm");
    let v = envelope(&["ca", "run", "--rule", "110", "--width", "64", "--steps", "100", "--init", "single", "--out", pgm.to_str().unwrap()]);
    assert!(v["result"]["rows"].is_null());
    let img = fs::read(&pgm).unwrap();
    assert!(img.starts_with(b"P4\n64 101\n"));
    assert_eq!(img.len(), b"P4\n64 101\n".len() + 101 * 8);
    let v = envelope(&["ca", "run", "--rule", "110", "--width", "5", "--steps", "1"]);
    assert_eq!(v["result"]["rows"], serde_json::json!(["00100", "01100"]));
    let csv = smallprog(&["ca", "run", "--rule", "204", "--width", "3", "--steps", "1", "--init", "101", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "0,1,0,1\n1,1,0,1\n");
}

#[test]
fn preimage_commands() {
    let v = envelope(&["preimage", "stats", "--width", "10", "--steps", "4"]);
    assert_eq!(v["result"]["mean_exact"], "1/1");
    let v = envelope(&["preimage", "exact", "--ending", "0110", "--steps", "2"]);
    assert!(v["result"]["exists"].is_boolean());
    let v = envelope(&["preimage", "solve", "--ending", "01100", "--steps", "1", "--bound", "32"]);
    assert_eq!(v["result"]["kind"], "found");
    let v = envelope(&["preimage", "stats", "--width", "12", "--steps", "2", "--mode", "sample:50:9"]);
    assert_eq!(v["seed"], 9);
}

#[test]
fn machine_commands() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&["tm", "bb", "--states", "2", "--symbols", "2", "--cap", "100"]);
    assert_eq!(v["result"]["max_steps"], 6);
    let champion = serde_json::to_string(&v["result"]["champion"]).unwrap();
    let m = write(dir.path(), "m.json", &champion);
    let v = envelope(&["tm", "run", "--machine", &m, "--cap", "100"]);
    assert_eq!(v["result"]["run"]["status"], "halted");
    assert_eq!(v["result"]["run"]["steps"], 6);
    let sys = write(dir.path(), "s.json", r#"{"appendants": ["11"]}"#);
    let v = envelope(&["tag", "run", "--system", &sys, "--word", "1", "--steps", "10"]);
    assert_eq!(v["result"]["words"].as_array().unwrap().last().unwrap().as_str().unwrap().len(), 11);
    let bad = write(dir.path(), "bad.json", r#"[[0, 0, 1, "R", 1]]"#);
    assert_eq!(smallprog(&["tm", "run", "--machine", &bad]).status.code(), Some(1));
}

const TRIANGLE_TO_VERTEX: &str = r#"{"rules": [{"name": "tv",
  "pattern": {"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]], "boundary": [0, 1, 2]},
  "replacement": {"vertices": 1, "edges": [], "boundary": [0, 0, 0]}}]}"#;

#[test]
fn causal_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let out = smallprog(&["causal", "generate", "--kind", "prism:3", "--out", g.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let graph: Value = serde_json::from_str(&fs::read_to_string(&g).unwrap()).unwrap();
    let graph_path = write(dir.path(), "graph.json", &graph["result"].to_string());
    let rules = write(dir.path(), "rules.json", TRIANGLE_TO_VERTEX);
    let v = envelope(&["causal", "check", "--rules", &rules]);
    assert_eq!(v["result"]["overlap_free"], false);
    let v = envelope(&["causal", "invariance", "--graph", &graph_path, "--rules", &rules]);
    assert_eq!(v["result"]["verdict"], "violated");
    let v = envelope(&["causal", "build", "--graph", &graph_path, "--rules", &rules, "--steps", "5"]);
    assert_eq!(v["result"]["network"]["events"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["terminated"], true);
    let v = envelope(&["causal", "generate", "--kind", "prism:50"]);
    let prism = write(dir.path(), "prism.json", &v["result"].to_string());
    let v = envelope(&["causal", "dimension", "--graph", &prism, "--rmin", "2", "--rmax", "10", "--centers", "0,7,60"]);
    assert!((v["result"]["dimension"].as_f64().unwrap() - 1.0).abs() < 0.2);
    // an envelope written by --out is accepted as input
    let v = envelope(&["causal", "invariance", "--graph", g.to_str().unwrap(), "--rules", &rules]);
    assert_eq!(v["result"]["verdict"], "violated");
}

#[test]
fn protocol_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", &smallprog::games::ThreadProtocol::thread_example().to_json());
    let v = envelope(&["games", "order-check", "--protocol", &p]);
    assert!(v["result"]["discrepancy_count"].as_u64().unwrap() > 0);
    assert_eq!(v["result"]["success_first"]["exact"], "1/1");
    assert_eq!(smallprog(&["games", "lhv", "--protocol", &p]).status.code(), Some(1));
    let v = envelope(&["games", "marginal", "--protocol", &p]);
    assert_eq!(v["result"][0]["distance"]["exact"], "0/1");
    let local = write(dir.path(), "l.json", &smallprog::games::ThreadProtocol::shared_bit().to_json());
    let v = envelope(&["games", "lhv", "--protocol", &local]);
    assert_eq!(v["result"]["within_classical_bound"], true);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let v = envelope(&["--seed", "5", "causal", "generate", "--kind", "random:10"]);
    assert_eq!(v["seed"], 5);
    let g = write(dir.path(), "g.json", &v["result"].to_string());
    let rules = write(dir.path(), "r.json", TRIANGLE_TO_VERTEX);
    let runs: [&[&str]; 4] = [
        &["--seed", "3", "ca", "run", "--rule", "30", "--width", "40", "--steps", "20", "--init", "random"],
        &["--seed", "3", "causal", "build", "--graph", &g, "--rules", &rules, "--schedule", "random", "--steps", "4"],
        &["--seed", "3", "causal", "invariance", "--graph", &g, "--rules", &rules, "--samples", "4"],
        &["preimage", "stats", "--width", "14", "--steps", "3", "--mode", "sample:30:4"],
    ];
    for args in runs {
        let (a, b) = (smallprog(args), smallprog(args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
