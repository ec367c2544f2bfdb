//! Byte-for-byte output checks of the `syz` binary against stored golden
//! files, repeated with 1, 2 and 8 worker threads.

mod common;

use common::data;
use std::process::Command;

#[test]
fn outputs_match_golden_files_for_all_worker_counts() {
    let bad = common::mismatches();
    assert!(bad.is_empty(), "mismatched outputs: {bad:?}");
}

#[test]
fn exit_codes() {
    let syz = env!("CARGO_BIN_EXE_syz");
    let run = |args: &[&str]| Command::new(syz).args(args).output().expect("binary runs");
    let missing = run(&["amoeba", "--poly", "missing.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());
    assert_eq!(run(&["amoeba", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // a loop edge is a computation error with a JSON report on stdout
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("loop.json");
    std::fs::write(
        &graph,
        r#"{"vertices":[{"id":0,"kind":"Negative"}],"edges":[{"a":0,"b":0},{"a":0,"b":0}]}"#,
    )
    .unwrap();
    let out = run(&["gamma", "flop", graph.to_str().unwrap(), "--edge", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["error"]["kind"], "flop");

    let bad_threads = Command::new(syz)
        .args(["monodromy", "k3check"])
        .env("SYZ_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));

    let svg_for_stats = run(&["gamma", "build", "--degree", "1", "--out", dir.path().join("g.csv").to_str().unwrap()]);
    assert_eq!(svg_for_stats.status.code(), Some(2));
}

#[test]
fn documented_examples() {
    let syz = env!("CARGO_BIN_EXE_syz");
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("spine.svg");
    let status = Command::new(syz)
        .args(["spine", "--poly", &data("line.json"), "--window", "-3", "3", "-3", "3", "--out"])
        .arg(&svg)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 3);

    let g = dir.path().join("g.json");
    assert!(Command::new(syz)
        .args(["gamma", "build", "--degree", "5", "--out"])
        .arg(&g)
        .status()
        .unwrap()
        .success());
    let out = Command::new(syz).args(["gamma", "stats"]).arg(&g).output().unwrap();
    let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats["negative"], 250);
    assert_eq!(stats["positive"], 50);
    assert_eq!(stats["euler_characteristic"], -200);
}
