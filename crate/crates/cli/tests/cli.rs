use std::path::Path;
use std::process::{Command, Output};

use perron_forge::artifacts::CertificateDoc;
use perron_forge::commands::verify_doc;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perron-forge")).args(args).output().unwrap()
}

fn construct_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["construct", "--out-dir", dir.to_str().unwrap()];
    args.extend(extra);
    run(&args)
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32, &str); 7] = [
        (&["analyze", "--poly", "1,x"], 2, "parse"),
        (&["analyze", "--poly", "-2,0,1"], 3, "not_perron"),
        (&["analyze", "--poly", "-1,0,0,-1,1"], 3, "not_irreducible"),
        (&["analyze", "--poly", "-1,-2,1,1"], 3, "not_perron"),
        (&["construct", "--poly", "-1,-1,0,1", "--primitive", "--out-dir", "/dev/null/x"], 7, "threshold_not_met"),
        (&["verify", "--out-dir", "/nonexistent/perron"], 8, "io"),
        (&["search", "--poly", "-1,-1,0,1", "--budget", "3"], 5, "budget_exceeded"),
    ];
    for (args, code, kind) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stderr_json(&out)["error"], kind, "{args:?}");
    }
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
}

#[test]
fn failed_construct_writes_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = construct_into(dir.path(), &["--poly", "-1,-1,0,1", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(5));
    let err: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("error.json")).unwrap()).unwrap();
    assert_eq!(err["error"], "budget_exceeded");
    assert!(!dir.path().join("matrix.json").exists());
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = construct_into(dir.path(), &["--poly", "-1,-1,-1,1", "--expand-edges"]);
    assert!(out.status.success());
    for name in ["matrix.json", "certificate.json", "report.json", "graph.dot"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let dot = std::fs::read_to_string(dir.path().join("graph.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(!dot.contains("label="));
    let out = run(&["verify", "--out-dir", dir.path().to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verified"], true);
}

#[test]
fn verify_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    assert!(construct_into(dir.path(), &["--poly", "-1,-1,0,1"]).status.success());
    let path = dir.path().join("certificate.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: CertificateDoc = serde_json::from_str(&text).unwrap();
    let matrix = doc.matrix.clone();
    assert!(verify_doc(&doc, &matrix).iter().all(|(_, ok)| *ok));

    // bump one entry of the matrix in both files
    let mut entries = matrix.entries().to_vec();
    entries[0][0] += 1;
    let bumped = perron_core::NonNegIntMatrix::new(entries).unwrap();
    let mut bad = doc.clone();
    bad.matrix = bumped.clone();
    let failed: Vec<String> = verify_doc(&bad, &bumped).into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
    assert!(failed.contains(&"characteristic polynomial".to_string()), "{failed:?}");

    // a forged invariance witness
    let mut forged = doc.clone();
    forged.action.invariance_witnesses[0][0] = "7".into();
    assert!(verify_doc(&forged, &matrix).iter().any(|(n, ok)| n == "cone invariance witnesses" && !ok));

    // a different polynomial
    let mut other = doc.clone();
    other.poly = perron_core::IntPolynomial::from_i64(&[-1, -1, -1, 1]).unwrap();
    assert!(verify_doc(&other, &matrix).iter().any(|(_, ok)| !ok));

    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = run(&["verify", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn analyze_and_bound_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["analyze", "--poly", "-1,-1,0,1", "--json", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["field"]["degree"], 3);
    assert_eq!(doc["field"]["real_places"], 1);
    assert_eq!(doc["field"]["complex_pairs"], 1);
    assert_eq!(doc["field"]["disc"], "-23");
    assert_eq!(doc["field"]["pisot"], true);
    assert!(dir.path().join("analysis.json").exists());

    let out = run(&["bound", "--poly", "-1,-1,1"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("d_PF = 2"), "{text}");
    let out = run(&["bound", "--poly", "-1,-1,0,1", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["bounds"]["kappa_status"], "not computed");
    assert_eq!(doc["bounds"]["pisot"]["rho_below_inverse_plastic"], true);
}

#[test]
fn basis_file_and_optimized_alpha() {
    let dir = tempfile::tempdir().unwrap();
    // 1, lambda + 1, lambda^2 + lambda spans Z[lambda]
    let basis = dir.path().join("basis.txt");
    std::fs::write(&basis, "1 0 0\n1 1 0\n0 1 1\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "construct",
        "--poly",
        "-1,-1,0,1",
        "--basis-file",
        basis.to_str().unwrap(),
        "--alpha",
        "optimize:20",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["lattice"]["label"], "user_basis");
    assert!(run(&["verify", "--out-dir", out_dir.to_str().unwrap()]).status.success());

    std::fs::write(&basis, "1 0 0\n0 2 0\n0 0 1\n").unwrap();
    let out = run(&["bound", "--poly", "-1,-1,0,1", "--basis-file", basis.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
