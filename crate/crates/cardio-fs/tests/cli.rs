use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_cardio-fs");
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/processed.cleveland.data");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn validate() {
    let (code, out, _) = run(&["validate", "--data", DATA]);
    assert_eq!(code, 0);
    assert!(out.contains("297 rows (6 dropped"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.data");
    std::fs::write(&bad, "63,1,9,145,233,1,2,150,0,2.3,3,0,6,0\n").unwrap();
    let (code, _, err) = run(&["validate", "--data", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("CPT"));
}

#[test]
fn select_prints_json() {
    let (code, out, _) = run(&["select", "--data", DATA, "--fs", "mi", "--mi-m", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["method"], "mi");
    assert_eq!(v["selected"].as_array().unwrap().len(), 3);
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, format!("data_path = {DATA}\nmodels = logistic, naive_bayes\nfolds = 5\n")).unwrap();
    let out = dir.path().join("r.csv");
    let cm = dir.path().join("cm.txt");
    let (code, _, err) = run(&[
        "run", "--config", cfg.to_str().unwrap(), "--fs", "chi2", "--fs", "none", "--format", "csv",
        "--out", out.to_str().unwrap(), "--confusion-out", cm.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().nth(1).unwrap().starts_with("logistic,chi2,ok,"));
    assert!(std::fs::read_to_string(&cm).unwrap().contains("actual 1"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "folds = one\n").unwrap();
    assert_eq!(run(&["run", "--config", cfg.to_str().unwrap()]).0, 1);
    assert_eq!(run(&["run", "--data", "/nonexistent", "--models", "knn"]).0, 1);
    assert_eq!(run(&["run", "--data", DATA, "--models", "perceptron"]).0, 1);
    assert_eq!(run(&["run", "--data", DATA, "--alpha", "2"]).0, 1);
}

#[test]
fn unwritable_output_exits_two() {
    let (code, _, err) = run(&[
        "run", "--data", DATA, "--fs", "none", "--models", "naive_bayes", "--folds", "2",
        "--out", "/nonexistent/dir/report.md",
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("cannot write"));
}
