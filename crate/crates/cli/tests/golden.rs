//! Golden runs of the command-line tool. Set UPDATE_GOLDEN=1 to rewrite the
//! files under tests/golden.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gkdecomp::LabelingPair;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkdecomp"))
        .args(args)
        .current_dir(manifest_dir())
        .env("GKDECOMP_OUT", out_dir)
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str], expected_code: i32) {
    let dir = tempfile::tempdir().unwrap();
    let out = run(args, dir.path());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(out.status.code(), Some(expected_code), "{name}: stderr was {stderr}");
    let rendered = format!("$ gkdecomp {}\nexit: {expected_code}\n{stdout}", args.join(" "));
    let path = manifest_dir().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &rendered).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(rendered, want, "{name} differs from {}", path.display());
}

#[test]
fn analyze_goldens() {
    golden("analyze_block", &["analyze", "tests/data/block.json"], 0);
    golden("analyze_delta", &["analyze", "tests/data/delta.csv"], 0);
    golden("analyze_epsilon", &["analyze", "tests/data/epsilon.json"], 0);
}

#[test]
fn decompose_goldens() {
    golden(
        "decompose_block_brute",
        &["decompose", "tests/data/block.json", "--method", "brute", "--lambda", "1"],
        0,
    );
    golden(
        "decompose_delta_spectral",
        &["decompose", "tests/data/delta.csv", "--method", "spectral", "--lambda", "1"],
        0,
    );
    golden(
        "decompose_delta_epsilon",
        &["decompose", "tests/data/delta.csv", "--method", "brute", "--epsilon", "0.1"],
        0,
    );
}

#[test]
fn rates_goldens() {
    golden(
        "rates_epsilon",
        &["rates", "tests/data/epsilon.json", "tests/data/epsilon_labeling.json", "--alpha-grid", "0:1:11"],
        0,
    );
    golden(
        "rates_block_gk",
        &["rates", "tests/data/block.json", "tests/data/block_labeling.json", "--alpha-grid", "0,0.5,1"],
        0,
    );
}

#[test]
fn tradeoff_goldens() {
    golden(
        "tradeoff_block",
        &["tradeoff", "tests/data/block.json", "--grid", "epsilon:0:1:5"],
        0,
    );
    golden(
        "tradeoff_delta",
        &["tradeoff", "tests/data/delta.csv", "--grid", "epsilon:0:0.2:11"],
        0,
    );
}

#[test]
fn simulate_goldens() {
    golden(
        "simulate_block_gk",
        &["simulate", "tests/data/block.json", "--scheme", "gk", "--n", "100000", "--seed", "7"],
        0,
    );
    golden(
        "simulate_delta_binary",
        &[
            "simulate",
            "tests/data/delta.csv",
            "tests/data/block_labeling.json",
            "--scheme",
            "binary-helper",
            "--n",
            "100000",
            "--seed",
            "7",
        ],
        0,
    );
    golden(
        "simulate_delta_limited",
        &[
            "simulate",
            "tests/data/delta.csv",
            "tests/data/block_labeling.json",
            "--scheme",
            "limited-helper",
            "--n",
            "100000",
            "--seed",
            "7",
        ],
        0,
    );
    golden(
        "simulate_epsilon_general",
        &[
            "simulate",
            "tests/data/epsilon.json",
            "tests/data/epsilon_labeling.json",
            "--scheme",
            "general-helper",
            "--n",
            "100000",
            "--seed",
            "7",
        ],
        0,
    );
}

#[test]
fn network_goldens() {
    golden(
        "network_star_block",
        &["network", "tests/data/star.json", "tests/data/block.json", "tests/data/block_labeling.json"],
        0,
    );
    golden(
        "network_no_helper_delta",
        &["network", "tests/data/star_no_helper.json", "tests/data/delta.csv", "tests/data/block_labeling.json"],
        1,
    );
    golden(
        "network_star_point",
        &["network", "tests/data/star.json", "tests/data/point_mass.json", "tests/data/point_labeling.json"],
        0,
    );
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["analyze", "tests/data/malformed.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let big = dir.path().join("big.json");
    let row = vec![1.0 / 169.0; 13];
    std::fs::write(&big, serde_json::json!({ "p": vec![row; 13] }).to_string()).unwrap();
    let out = run(&["decompose", big.to_str().unwrap(), "--method", "brute", "--lambda", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("24"));

    let out = run(&["rates", "tests/data/block.json", "tests/data/epsilon_labeling.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "tests/data/block.json", "--scheme", "binary-helper"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn written_artifacts_carry_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["decompose", "tests/data/block.json", "--method", "brute", "--lambda", "1", "--output", "lab.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("lab.json")).unwrap();
    let labels: LabelingPair = serde_json::from_str(&text).unwrap();
    assert_eq!(labels, LabelingPair::binary(vec![0, 0, 1, 1], vec![0, 0, 1, 1]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["params"]["lambda"], 1.0);
    assert_eq!(v["params"]["method"], "brute");

    let out = run(
        &["rates", "tests/data/block.json", dir.path().join("lab.json").to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    assert!(csv.starts_with("# command: rates"));
    // R_H column is zero for the common-information labeling.
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let r_h: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(r_h.abs() < 1e-9);
    }
}

#[test]
fn simulated_rates_parse_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["simulate", "tests/data/block.json", "--scheme", "gk", "--n", "20000", "--seed", "3"],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let sum: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("sum_rate: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((sum - 3.0).abs() <= 0.03 * 3.0);
    let bundle = std::fs::read(dir.path().join("gk.gksb")).unwrap();
    assert_eq!(&bundle[..4], b"GKSB");
}
