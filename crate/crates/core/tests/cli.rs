use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hedgehog(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hedgehog"))
        .args(args)
        .env("HEDGEHOG_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

#[test]
fn profile_writes_commented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = hedgehog(dir.path(), &["profile", "--m", "3", "--points", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["origin_curvature"], 0.5);

    let csv = std::fs::read_to_string(dir.path().join("profile_m3.csv")).unwrap();
    let mut lines = csv.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next(), Some("rho,q0,alpha,dq0"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(row[0], 2.5);
    assert!((row[1] - 1.0 / (1.0 + 6.25f64).sqrt()).abs() < 1e-8);
    assert_eq!(lines.count(), 3);
}

#[test]
fn explicit_out_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("v.json");
    let out = hedgehog(
        dir.path(),
        &["potential", "--m", "2", "--points", "3", "--format", "json", "--out", path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["rho", "v_bracket", "v_closed_form"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert!(doc["meta"]["config"].get("out").is_none());
}

#[test]
fn plot_stub_accompanies_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = hedgehog(dir.path(), &["spectrum", "--m", "1", "--l", "0..0", "--n", "1..2", "--plot-stub"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n.ends_with(".gp") || n.ends_with(".gnuplot")), "{names:?}");
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["profile", "--m", "0"][..],
        &["profile", "--m", "1", "--method", "analytic"],
        &["spectrum", "--m", "1", "--n", "3..1"],
        &["frobnicate"],
        &["profile", "--points", "many"],
    ] {
        assert_eq!(hedgehog(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = hedgehog(dir.path(), &["spectrum", "--m", "1", "--rho-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("increase rho_max"));
}

#[test]
fn verify_reports_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = hedgehog(dir.path(), &["verify"]);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    let failing = report["first_failure"].as_str();
    assert_eq!(out.status.code(), Some(if failing.is_some() { 1 } else { 0 }));
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"closed_form_ratio_m3") && names.contains(&"closed_form_ratio_m2"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args: [&[&str]; 3] = [
        &["profile", "--m", "2", "--method", "shoot", "--points", "50"],
        &["potential", "--m", "1", "--format", "json"],
        &["spectrum", "--m", "2", "--boxes", "20,30"],
    ];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for args in args {
        let x = hedgehog(a.path(), args);
        let y = hedgehog(b.path(), args);
        assert_eq!(x.status.code(), Some(0), "{args:?}");
        assert_eq!(x.stdout, y.stdout);
    }
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap());
    }
}
