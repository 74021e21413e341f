use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use specshift::io::PiecewiseFile;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_specshift")
}

fn scratch(tag: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("specshift-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&p);
    std::fs::create_dir_all(&p).unwrap();
    p
}

fn specshift(args: &[&str], out: &Path) -> Output {
    Command::new(exe()).args(args).arg("--out").arg(out).output().unwrap()
}

#[test]
fn scalar_pair_exports_closed_form() {
    let dir = scratch("scalar");
    let cfg = dir.join("pair.json");
    std::fs::write(dir.join("v.json"), r#"{ "dim": 1, "re": [[1.0]] }"#).unwrap();
    std::fs::write(
        &cfg,
        r#"{ "dims": [1], "ensemble_size": 1, "ssf": { "h": { "dim": 1, "re": [[0.0]] }, "v": "v.json", "order": 3 } }"#,
    )
    .unwrap();
    let out = specshift(&["ssf", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let file: PiecewiseFile = serde_json::from_str(&std::fs::read_to_string(dir.join("eta_m.json")).unwrap()).unwrap();
    let eta = file.to_piecewise().unwrap();
    for j in 0..=50 {
        let x = j as f64 / 50.0;
        let expect = if x < 1.0 { (1.0 - x) * (1.0 - x) / 2.0 } else { 0.0 };
        assert!((eta.eval(x).re - expect).abs() < 1e-12, "x={x}");
    }
    assert_eq!(eta.eval(-0.5).re, 0.0);
    assert_eq!(eta.eval(1.5).re, 0.0);
    let csv = std::fs::read_to_string(dir.join("eta_m.csv")).unwrap();
    assert!(csv.starts_with("x,value\n0,0.5\n"));
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn identities_at_dimension_three() {
    let dir = scratch("identities");
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{ "dims": [3], "n": 2 }"#).unwrap();
    let out = specshift(&["verify-identities", "--config", cfg.to_str().unwrap(), "--seed", "42"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["seed"], 42);
    assert_eq!(report["suites"][0]["suite"], "verify-identities");
}

#[test]
fn missing_input_is_a_usage_error() {
    let dir = scratch("missing");
    let out = specshift(&["ssf", "--config", "/nonexistent/specshift.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "{err}");
    assert!(!dir.join("report.json").exists());
}

#[test]
fn invalid_config_is_a_usage_error() {
    let dir = scratch("invalid");
    let cfg = dir.join("bad.json");
    for text in [r#"{ "n": 7 }"#, r#"{ "unknown": 1 }"#, "not json"] {
        std::fs::write(&cfg, text).unwrap();
        let out = specshift(&["bounds", "--config", cfg.to_str().unwrap()], &dir);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    let out = specshift(&["bounds", "--threads", "0"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn contract_violation_exits_one_with_report() {
    let dir = scratch("violation");
    let cfg = dir.join("tight.json");
    std::fs::write(&cfg, r#"{ "dims": [3], "ensemble_size": 2, "tolerances": { "trace_formula": 1e-300 } }"#).unwrap();
    let out = specshift(&["trace-formula", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["failures"].as_array().unwrap().iter().any(|f| f == "trace-formula/trace_formula"));
}
