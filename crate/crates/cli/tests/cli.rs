//! End-to-end tests of the `qe` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(rel)
}

fn qe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qe")).args(args).env_remove("QE_SEED").output().expect("qe runs")
}

fn qe_on(sub: &str, rel: &str, extra: &[&str]) -> Output {
    let file = corpus(rel);
    let mut args = vec![sub, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    qe(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema_valid(report: &Path) -> serde_json::Value {
    let read = |p: &Path| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(p).expect("file exists")).expect("valid JSON")
    };
    let schema = read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/schema/report-v1.schema.json"));
    let value = read(report);
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}");
    value
}

#[test]
fn curvature_lists_the_cubic_profile_components() {
    let o = qe_on("curvature", "profiles/cubic.qe", &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("W_{u x1 u x1} = -3/2*x1"), "{out}");
    assert!(out.contains("divW_{u x1 u} = -3/2"), "{out}");
}

#[test]
fn curvature_of_a_flat_profile_reports_zero() {
    let o = qe_on("curvature", "profiles/flat.qe", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all curvature components zero"));
}

#[test]
fn curvature_json_matches_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = qe_on("curvature", "metrics/sphere.qe", &["--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = schema_valid(&json);
    assert_eq!(v["command"], "curvature");
}

#[test]
fn check_accepts_the_plane_wave() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = qe_on("check", "qe/plane_wave.qe", &["--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Q(f): Zero (exact)"));
    assert!(out.contains("lambda = 0"));
    assert!(out.contains("Null"));
    assert!(out.trim_end().ends_with("PASS"));
    let v = schema_valid(&json);
    assert_eq!(v["command"], "check");
    assert_eq!(v["summary"]["unmet"], serde_json::json!([]));
}

#[test]
fn check_rejects_a_mismatched_potential() {
    let o = qe_on("check", "nonqe/mismatched_soliton.qe", &[]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("NonZero"), "{out}");
    assert!(out.trim_end().ends_with("FAIL"));
}

#[test]
fn check_point_overrides_the_default() {
    let o = qe_on("check", "qe/de_sitter_exp.qe", &["--point", "t=0.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Timelike"));
    let bad = qe_on("check", "qe/de_sitter_exp.qe", &["--point", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn conformally_einstein_case_prints_the_notice() {
    let o = qe_on("check", "qe/conformally_flat_half.qe", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mu = -1/2: structure theorems inapplicable"));
}

#[test]
fn solve_writes_a_csv_and_matches_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("r.json");
    let o = qe_on(
        "solve",
        "qe/plane_wave.qe",
        &["--interval", "0,0.5", "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,f,fprime,h,residual"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 501);
    let last = rows.last().unwrap();
    assert!((last[0] - 0.5).abs() < 1e-12);
    assert!((last[1] - 0.25).abs() < 1e-9, "f(0.5) = {}", last[1]);
    assert!(stdout(&o).contains("PASS"));
    assert_eq!(schema_valid(&json)["command"], "solve");
}

#[test]
fn solve_refuses_a_non_harmonic_profile() {
    let o = qe_on("solve", "profiles/quartic.qe", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no isotropic qE potential exists"));
}

#[test]
fn solve_rejects_a_zero_step() {
    let o = qe_on("solve", "qe/plane_wave.qe", &["--step", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let o = qe(&["curvature", "/nonexistent/file.qe"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qe");
    std::fs::write(&bad, "chart u v x1 x2;\nppwave_H = x1^^2;\n").unwrap();
    let o = qe(&["curvature", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2:"), "{}", stderr(&o));
}

#[test]
fn invalid_seed_variable_is_an_input_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_qe")).args(["suite"]).env("QE_SEED", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suite_with_injected_sign_error_fails() {
    let o = qe(&["suite", "--inject-weyl-sign-error"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.lines().any(|l| l.contains("closed_form.")), "{err}");
    assert!(!err.lines().any(|l| l.contains("classical.")));
}
