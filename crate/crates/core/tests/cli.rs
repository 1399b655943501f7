use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cmhodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmhodge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn analyze_cyclic4_dims() {
    let out = cmhodge(&["analyze", "--catalog", "cyclic:4", "--degree", "all"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let dims: Vec<(u64, u64)> = report["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["p"].as_u64().unwrap(), d["hodgeDim"].as_u64().unwrap()))
        .collect();
    assert_eq!(dims, vec![(0, 1), (1, 2), (2, 1)]);
    assert_eq!(report["latticeRank"]["raw"], 3);
    assert!(out.stdout.ends_with(b"}\n"));
}

#[test]
fn verify_intact_then_corrupted() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();
    let out = cmhodge(&["witness", "--catalog", "cyclic:8", "--certify", cert_s]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&cmhodge(&["verify", "--certify", cert_s])), 0);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["certificates"][2]["verdict"] = Value::Bool(false);
    std::fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = cmhodge(&["verify", "--input", cert_s]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["failure"]["code"], "E_VERDICT");
}

#[test]
fn analyze_with_certify_writes_document() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let out = cmhodge(&["analyze", "--catalog", "quaternion:8", "--degree", "2", "--certify", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["certificates"].as_array().unwrap().len(), 1);
    assert_eq!(code(&cmhodge(&["verify", "--certify", cert.to_str().unwrap()])), 0);
}

#[test]
fn oracle_klein() {
    let out = cmhodge(&["oracle", "--catalog", "elementary-abelian:4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["agree"], true);
    let out = cmhodge(&["oracle", "--catalog", "dihedral:8", "--all-types", "--jobs", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["cmTypesChecked"], 16);
}

#[test]
fn deltas_orbits_only() {
    let out = cmhodge(&["deltas", "--catalog", "elementary-abelian:4", "--degree", "1", "--orbits-only"]);
    assert_eq!(code(&out), 0);
    let d = &json(&out)["degrees"][0];
    assert_eq!(d["count"], 4);
    assert_eq!(d["deltas"], serde_json::json!([[0, 2], [1, 2]]));
}

#[test]
fn catalog_emits_parseable_instance() {
    let out = cmhodge(&["catalog"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("quaternion:8"));

    let out = cmhodge(&["catalog", "--catalog", "dihedral:8,sub=0.4"]);
    assert_eq!(code(&out), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8.txt");
    std::fs::write(&path, &out.stdout).unwrap();
    let from_file = cmhodge(&["analyze", "--input", path.to_str().unwrap()]);
    let from_catalog = cmhodge(&["analyze", "--catalog", "dihedral:8,sub=0.4"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_catalog.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&cmhodge(&["--help"])), 0);
    assert_eq!(code(&cmhodge(&["frobnicate"])), 1);
    assert_eq!(code(&cmhodge(&["analyze", "--jobs", "x", "--catalog", "cyclic:4"])), 1);
    assert_eq!(code(&cmhodge(&["analyze", "--catalog", "dihedral:6"])), 2);
    assert_eq!(code(&cmhodge(&["analyze", "--catalog", "no-such-group:4"])), 2);
    assert_eq!(code(&cmhodge(&["analyze"])), 2);
    assert_eq!(code(&cmhodge(&["oracle", "--catalog", "cyclic:8", "--cap", "10"])), 4);
    assert_eq!(code(&cmhodge(&["oracle", "--catalog", "cyclic:8", "--all-types", "--type-cap", "2"])), 4);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "order 2\niota 1\nrow 0 1\nrow 1 0\nfactor 0\ncmtype 0 1\n").unwrap();
    let out = cmhodge(&["analyze", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("CM-type") || !out.stderr.is_empty());
    assert_eq!(code(&cmhodge(&["verify", "--input", bad.to_str().unwrap()])), 2);
    assert!(!Path::new("/nonexistent").exists());
    assert_eq!(code(&cmhodge(&["analyze", "--input", "/nonexistent/x"])), 2);
}
