use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(path).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockkernel"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn certify_distinct_points_is_strictly_positive() {
    let out = run(&[
        "certify",
        "--kernel",
        "gaussian",
        "--t",
        "1",
        "--points",
        "real_points.txt",
        "--expect",
        "strictly-positive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("certify_gaussian.json"));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["result"]["verdict"], "StrictlyPositive");
}

#[test]
fn verdict_mismatch_exits_one() {
    let out = run(&[
        "certify",
        "--kernel",
        "gaussian",
        "--points",
        "real_points.txt",
        "--expect",
        "indefinite",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["matches_expectation"], false);
}

#[test]
fn duplicate_point_exits_two() {
    let out = run(&[
        "certify",
        "--kernel",
        "gaussian",
        "--points",
        "duplicate_points.txt",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert_eq!(err["error"], "DuplicatePoints");
    assert!(err["message"].as_str().unwrap().contains("0 and 2"));
}

#[test]
fn embed_pairs_reports_equality() {
    let out = run(&["embed", "--words", "words.txt", "--pairs"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text, golden("embed_pairs.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g,h,dist_sq,word_length,equal"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 15);
    for row in rows {
        let f: Vec<_> = row.split(',').collect();
        assert_eq!(f[2], f[3]);
        assert_eq!(f[4], "true");
    }
}

#[test]
fn embed_report_lists_edge_coefficients() {
    let out = run(&["embed", "--words", "words.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let words = report["result"]["words"].as_array().unwrap();
    let inv = words.iter().find(|w| w["word"] == "a2'").unwrap();
    assert_eq!(inv["norm_sq"], 1);
    assert_eq!(inv["entries"][0]["base"], "a2'");
    assert_eq!(inv["entries"][0]["coefficient"], -1);
}

#[test]
fn word_length_is_conditionally_negative() {
    let out = run(&[
        "cnd",
        "--psi",
        "word-length",
        "--points",
        "words.txt",
        "--expect",
        "cnd",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("cnd_word_length.json"));
}

#[test]
fn pseudo_hyperbolic_distance_is_conditionally_negative() {
    let out = run(&[
        "cnd",
        "--psi",
        "ph-d2",
        "--points",
        "disk_points.txt",
        "--expect",
        "cnd",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn separate_requires_a_seed() {
    let out = run(&[
        "separate",
        "--kernel",
        "ph-gaussian",
        "--points",
        "disk_points.txt",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "UsageError");
}

#[test]
fn separate_is_seeded_and_byte_stable() {
    let args = [
        "separate",
        "--kernel",
        "ph-gaussian",
        "--points",
        "disk_points.txt",
        "--seed",
        "11",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&run(&args)));
    assert_eq!(stdout(&first), golden("separate_ph_gaussian.json"));
    let report: Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["seed"], 11);
    assert_eq!(report["result"]["vandermonde"]["nonsingular"], true);
}

#[test]
fn config_file_overrides_flags() {
    // The config names ph_gaussian over the complex domain, replacing --kernel gaussian.
    let out = run(&[
        "certify",
        "--kernel",
        "gaussian",
        "--points",
        "disk_points.txt",
        "--config",
        "certify_config.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["kernel"]["name"], "ph_gaussian");
    assert_eq!(report["expect"], "strictly-positive");
}

#[test]
fn ambiguous_domain_is_a_usage_error() {
    let out = run(&[
        "certify",
        "--kernel",
        "drury-arveson",
        "--points",
        "disk_points.txt",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "UsageError");
}

#[test]
fn lift_reports_truncation_and_certificate() {
    let out = run(&[
        "lift",
        "--kernel",
        "drury-arveson",
        "--domain",
        "complex",
        "--points",
        "disk_points.txt",
        "--series",
        "exp",
        "--lift-t",
        "0.5",
        "--max-terms",
        "200",
        "--expect",
        "strictly-positive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["result"]["truncation_degree"].as_u64().unwrap() > 0);
    assert_eq!(report["result"]["strictness_claims_supported"], true);
}

#[test]
fn divergent_geometric_lift_exits_two() {
    let out = run(&[
        "lift",
        "--kernel",
        "drury-arveson",
        "--domain",
        "complex",
        "--points",
        "disk_points.txt",
        "--series",
        "geometric",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "Divergent");
}

#[test]
fn approximate_writes_report_and_csv_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let csv_path = dir.path().join("samples.csv");
    let out = run(&[
        "approximate",
        "--config",
        "sin_experiment.json",
        "--output",
        report_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&report_path).unwrap();
    let report: Value = serde_json::from_str(&text).unwrap();
    let sup = report["result"]["report"]["sup_error"].as_f64().unwrap();
    assert!(sup > 0.0 && sup < 1e-2);
    assert_eq!(report["result"]["report"]["n_centers"], 15);
    let csv = fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("x,f,model,error\n"));
    assert_eq!(csv.lines().count(), 2002);
    // Only the two outputs exist: the temporary files were renamed away.
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);

    let again = dir.path().join("again.json");
    run(&[
        "approximate",
        "--config",
        "sin_experiment.json",
        "--output",
        again.to_str().unwrap(),
    ]);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

#[test]
fn approximate_sup_error_bound_is_enforced() {
    let out = run(&[
        "approximate",
        "--config",
        "sin_experiment.json",
        "--max-sup-error",
        "1e-6",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_may_not_overwrite_input() {
    let out = run(&[
        "certify",
        "--kernel",
        "gaussian",
        "--points",
        "real_points.txt",
        "--output",
        "real_points.txt",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(fs::read_to_string(fixtures().join("real_points.txt"))
        .unwrap()
        .contains("0.5 -0.5"));
}

#[test]
fn thread_count_does_not_change_reports() {
    let args = [
        "certify",
        "--kernel",
        "ph-gaussian",
        "--points",
        "disk_points.txt",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_fockkernel"))
        .args(args)
        .current_dir(fixtures())
        .env("FOCKKERNEL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, run(&args).stdout);
}

#[test]
fn unknown_flag_is_a_json_usage_error() {
    let out = run(&["certify", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "UsageError");
}
