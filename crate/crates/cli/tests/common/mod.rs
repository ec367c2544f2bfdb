//! Golden-file cases shared by the golden and acceptance tests.
//!
//! Set `SYZ_BLESS=1` to rewrite the golden files from the current binary.

use std::path::{Path, PathBuf};
use std::process::Command;

pub const WORKERS: [&str; 3] = ["1", "2", "8"];

pub fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// One golden case: arguments, with `{out}` replaced by an output path when
/// the result is a file, and the golden file name.
pub struct Case {
    pub name: &'static str,
    args: Vec<String>,
    /// Extension of the `--out` file, or `None` for stdout.
    file: Option<&'static str>,
}

fn case(name: &'static str, file: Option<&'static str>, args: &[&str]) -> Case {
    Case {
        name,
        args: args.iter().map(|s| s.to_string()).collect(),
        file,
    }
}

pub fn cases() -> Vec<Case> {
    let line = data("line.json");
    let cubic = data("cubic.json");
    let prism = data("prism.json");
    let w = ["--window", "-3", "3", "-3", "3"];
    let mut spine_svg = vec!["spine", "--poly", &line];
    spine_svg.extend(w);
    spine_svg.extend(["--resolution", "96", "--out", "{out}"]);
    let mut spine_json = vec!["spine", "--poly", &line];
    spine_json.extend(w);
    spine_json.extend(["--resolution", "96", "--grid", "256"]);
    let cubic_args = [
        "components", "--poly", &cubic, "--window", "-6", "6", "-6", "6", "--resolution", "128", "--grid", "256",
    ];
    let positive = data("positive.json");
    let negative = data("negative.json");
    let edge = data("edge.json");
    vec![
        case("amoeba_line.csv", Some("csv"), &["amoeba", "--poly", &line, "--window", "-3", "3", "-3", "3", "--resolution", "48", "--out", "{out}"]),
        case("amoeba_line.svg", Some("svg"), &["amoeba", "--poly", &line, "--resolution", "64", "--out", "{out}"]),
        case("spine_line.svg", Some("svg"), &spine_svg),
        case("spine_line.json", None, &spine_json),
        case("components_cubic.json", None, &cubic_args),
        case("ronkin_line.json", None, &["ronkin", "--poly", &line, "--point", "0.5", "-0.25", "--grid", "256"]),
        case("compactify_line.csv", Some("csv"), &["compactify", "--poly", &line, "--resolution", "32", "--angular", "64", "--out", "{out}"]),
        case("gamma_d2.json", Some("json"), &["gamma", "build", "--degree", "2", "--out", "{out}"]),
        case("gamma_d1.dot", Some("dot"), &["gamma", "build", "--degree", "1", "--out", "{out}"]),
        case("gamma_d1.svg", Some("svg"), &["gamma", "build", "--degree", "1", "--out", "{out}"]),
        case("gamma_prism_stats.json", None, &["gamma", "stats", &prism]),
        case("gamma_prism_mirror.json", None, &["gamma", "mirror", &prism]),
        case("gamma_prism_flop.json", None, &["gamma", "flop", &prism, "--edge", "6"]),
        case("gamma_prism_conifold.json", None, &["gamma", "conifold", &prism, "--edge", "4"]),
        case("monodromy_fixed.json", None, &["monodromy", "fixed", &edge]),
        case("monodromy_positive.json", None, &["monodromy", "classify", &positive]),
        case("monodromy_negative.json", None, &["monodromy", "classify", &negative]),
        case("monodromy_mirror.json", None, &["monodromy", "mirror", &positive]),
        case("monodromy_k3.json", None, &["monodromy", "k3check"]),
        case("local_hl.json", None, &["local", "hl", "--point", "1.1", "1", "0.5-2i"]),
        case("local_classify.json", None, &["local", "hl-classify", "--x", "0", "3", "3"]),
        case("local_joyce.json", None, &["local", "joyce", "--sign", "-", "--roundtrip", "2000", "--seed", "5"]),
        case("local_slag_hl.json", None, &["local", "slag", "--model", "hl", "--target", "0.5", "0", "0", "--samples", "200", "--seed", "1"]),
        case("local_slag_joyce.json", None, &["local", "slag", "--model", "joyce", "--target", "0.7", "0.1", "-0.3", "--samples", "200", "--seed", "2", "--sign", "-"]),
    ]
}

/// Runs a case with the given worker count and returns its output bytes.
fn run_case(c: &Case, workers: &str, scratch: &Path) -> Vec<u8> {
    let out = c.file.map(|ext| scratch.join(format!("{}.{ext}", workers)));
    let args: Vec<String> = c
        .args
        .iter()
        .map(|a| match (&out, a.as_str()) {
            (Some(p), "{out}") => p.display().to_string(),
            _ => a.clone(),
        })
        .collect();
    let result = Command::new(env!("CARGO_BIN_EXE_syz"))
        .args(&args)
        .env("SYZ_THREADS", workers)
        .output()
        .expect("binary runs");
    assert!(
        result.status.success(),
        "{} failed: {}",
        c.name,
        String::from_utf8_lossy(&result.stderr)
    );
    match out {
        Some(p) => std::fs::read(p).expect("output written"),
        None => result.stdout,
    }
}

/// Runs every case at every worker count; returns the names of the cases
/// whose bytes differ between worker counts or from the golden file.
pub fn mismatches() -> Vec<String> {
    let bless = std::env::var("SYZ_BLESS").is_ok_and(|v| v == "1");
    let mut bad = Vec::new();
    for c in cases() {
        let scratch = tempfile::tempdir().expect("temp dir");
        let outputs: Vec<Vec<u8>> = WORKERS.iter().map(|w| run_case(&c, w, scratch.path())).collect();
        let golden = golden_dir().join(c.name);
        if bless {
            std::fs::write(&golden, &outputs[0]).expect("golden written");
        }
        let expected = std::fs::read(&golden).unwrap_or_default();
        if outputs.iter().any(|o| *o != expected) {
            bad.push(c.name.to_string());
        }
    }
    bad
}
