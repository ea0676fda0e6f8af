use std::path::Path;
use std::process::{Command, Output};

use saturnum::fixtures;
use saturnum::io::{read_planar_code, write_planar_code};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_saturnum")).args(args).env_remove("SATURNUM_CONFIG").output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn write_graphs(path: &Path, graphs: &[saturnum::FullereneGraph]) {
    let mut f = std::fs::File::create(path).unwrap();
    write_planar_code(&mut f, graphs, true).unwrap();
}

#[test]
fn generate_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (n, count) in [(20, 1), (22, 0), (30, 3)] {
        let path = dir.path().join(format!("g{n}.pc"));
        let out = run(&["generate", "--n", &n.to_string(), "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        let graphs = read_planar_code(&mut std::fs::File::open(&path).unwrap()).unwrap();
        assert_eq!(graphs.len(), count);
    }
    assert_eq!(run(&["generate", "--n", "21"]).status.code(), Some(2));
    // Stdout carries the same bytes as the file.
    let out = run(&["generate", "--n", "30"]);
    assert_eq!(out.stdout, std::fs::read(dir.path().join("g30.pc")).unwrap());
}

#[test]
fn saturation_of_known_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.pc");
    write_graphs(&path, &[fixtures::dodecahedron(), fixtures::c60()]);
    let out = run(&["saturation", "--exact", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = lines(&out);
    assert_eq!(rows[0]["s"], 6);
    assert_eq!(rows[1]["s"], 18);
    assert!(rows.iter().all(|r| r["optimal"] == true));
    let out = run(&["saturation", "--greedy", "5", "--in", path.to_str().unwrap()]);
    assert!(lines(&out).iter().all(|r| r["maximal"] == true && r["size"].as_u64().unwrap() >= 6));
    assert_eq!(run(&["saturation", "--exact", "--greedy", "1", "--in", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn corrupt_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.pc");
    std::fs::write(&path, b">>planar_code<<\x14\x02\x03").unwrap();
    let out = run(&["saturation", "--exact", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    assert_eq!(run(&["analyze", "--in", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn tiny_budget_flags_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    let graphs = dir.path().join("c60.pc");
    write_graphs(&graphs, &[fixtures::c60()]);
    let cfg = dir.path().join("saturnum.cfg");
    std::fs::write(&cfg, "budget = 2\ngreedy_seeds = 1\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_saturnum"))
        .args(["saturation", "--exact", "--in", graphs.to_str().unwrap()])
        .env("SATURNUM_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let rows = lines(&out);
    assert_eq!(rows[0]["optimal"], false);
    assert!(rows[0]["s"].as_u64().unwrap() >= 18);
}

#[test]
fn zigzag_nanotube_is_certified_optimal() {
    let out = run(&[
        "nanotube", "--p1", "8", "--p2", "0", "--rings", "4", "--cap-start", "builtin:8_0", "--cap-end", "builtin:8_0",
        "--match",
    ]);
    assert!(out.status.success());
    let r = &lines(&out)[0];
    assert_eq!(r["n"], 108);
    assert_eq!(r["matching"]["size"], 34);
    assert_eq!(r["certificate"]["implied_bound"], 34);
    assert_eq!(r["optimal"], true);
}

#[test]
fn armchair_caps_from_files_give_c60() {
    let dir = tempfile::tempdir().unwrap();
    let cap = dir.path().join("half.txt");
    std::fs::write(&cap, saturnum::tube::cap_5_5().to_text()).unwrap();
    let cfg = dir.path().join("caps.cfg");
    std::fs::write(&cfg, format!("cap.half = {}\n", cap.display())).unwrap();
    let graph = dir.path().join("tube.pc");
    let out = run(&[
        "--config", cfg.to_str().unwrap(), "nanotube", "--p1", "5", "--p2", "5", "--rings", "0", "--cap-start", "half",
        "--cap-end", cap.to_str().unwrap(), "--out", graph.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g = read_planar_code(&mut std::fs::File::open(&graph).unwrap()).unwrap().remove(0);
    assert_eq!(g.canonical_code(), fixtures::c60().canonical_code());
}

#[test]
fn incompatible_cap_exits_with_input_error() {
    let out = run(&[
        "nanotube", "--p1", "8", "--p2", "0", "--rings", "2", "--cap-start", "builtin:8_0", "--cap-end", "builtin:5_5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("incompatible"));
}

#[test]
fn survey_rows_and_determinism() {
    let a = run(&["survey", "--min", "20", "--max", "40", "--jobs", "1"]);
    assert!(a.status.success());
    let csv = String::from_utf8(a.stdout.clone()).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][0], "n");
    let row = |n: &str| rows.iter().find(|r| r[0] == n).unwrap().clone();
    assert_eq!(&row("20")[1..4], ["1", "6", "1"]);
    assert_eq!(row("30")[3], "0");
    assert_eq!(row("40")[3], "1");
    assert_eq!(row("22")[1], "0");
    let b = run(&["survey", "--min", "20", "--max", "40", "--jobs", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["survey", "--min", "20", "--max", "60"]).status.code(), Some(2));
    let json = run(&["survey", "--min", "24", "--max", "24", "--report", "json"]);
    assert_eq!(lines(&json)[0]["min_s"], 8);
}

#[test]
fn certify_and_analyze_emit_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c60.pc");
    write_graphs(&path, &[fixtures::c60()]);
    let out = run(&["certify", "--exact", "--trace", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let c = &lines(&out)[0];
    assert_eq!(c["valid"], true);
    assert_eq!(c["implied_bound"], 18);
    assert_eq!(c["trace"]["vertex_charge"].as_array().unwrap().len(), 60);
    let out = run(&["analyze", "--in", path.to_str().unwrap()]);
    let a = &lines(&out)[0];
    assert_eq!(a["case"], "B");
    assert_eq!(a["class_sizes"][0], 12);
}

#[test]
fn find_cap_writes_parseable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["find-cap", "--p1", "8", "--p2", "0", "--max-faces", "12", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let mut count = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let cap = saturnum::tube::Cap::parse(&std::fs::read_to_string(entry.unwrap().path()).unwrap()).unwrap();
        assert_eq!((cap.p1, cap.p2), (8, 0));
        count += 1;
    }
    assert!(count > 0);
}
