use std::path::PathBuf;
use std::process::{Command, Output};

use kd_uncd::diagram::{DiagramRecord, PointStatus, UncertaintyDiagram};
use kd_uncd::kd::{StateVector, TransitionMatrix};
use kd_uncd::states::{coset_classical_state, CosetSpec};
use num_complex::Complex64;

fn kduncd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kduncd")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kduncd-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn trivial_diagram() {
    let out = kduncd(&["diagram", "--d", "1"]);
    assert!(out.status.success());
    let rec: DiagramRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec.points.len(), 1);
    assert_eq!(rec.points[0].status, PointStatus::Present);
}

#[test]
fn d8_svg_marks_the_hole() {
    let dir = scratch("d8");
    let svg = dir.join("d8.svg");
    let out = kduncd(&["diagram", "--d", "8", "--engine", "both", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    // (5,2) sits at x = 60 + 40·4.5, y = 60 + 40·8 − 40·1.5
    assert!(text.contains(r#"<circle cx="240.00" cy="320.00""#));
    assert_eq!(text.matches("<rect x=").count(), 4, "one square per divisor pair of 8");
}

#[test]
fn d10_row_two_holes() {
    let dir = scratch("d10");
    let csv = dir.join("d10.csv");
    let out = kduncd(&["diagram", "--d", "10", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("na,nb,status\n"));
    let holes: Vec<usize> = text
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1] == "2" && f[2] == "hole" && f[0].parse::<usize>().unwrap() * 2 >= 10).then(|| f[0].parse().unwrap())
        })
        .collect();
    assert_eq!(holes, vec![6, 7]);
}

#[test]
fn json_reloads_and_resaves_identically() {
    let out = kduncd(&["diagram", "--d", "6", "--engine", "numeric"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rec = DiagramRecord::from_json(&text).unwrap();
    let u = TransitionMatrix::dft(6).unwrap();
    let diag = UncertaintyDiagram::from_record(&rec, &u, false, 1e-10).unwrap();
    assert_eq!(diag.to_json(), text);
}

#[test]
fn engine_disagreement_fails() {
    // an absurd tolerance makes the numeric engine drop genuine singular values
    let out = kduncd(&["diagram", "--d", "4", "--engine", "both", "--rank-tol", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_abort_and_partial() {
    let args = ["diagram", "--d", "6", "--max-rank-calls", "2"];
    assert_eq!(kduncd(&args).status.code(), Some(3));
    let mut partial = args.to_vec();
    partial.push("--allow-partial");
    let out = kduncd(&partial);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"unknown\""));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kduncd(&["diagram"]).status.code(), Some(2));
    assert_eq!(kduncd(&["verify", "T7"]).status.code(), Some(2));
    assert_eq!(kduncd(&["diagram", "--d", "3", "--rank-tol", "-1"]).status.code(), Some(2));
}

fn classify(psi: &StateVector, name: &str, extra: &[&str]) -> Output {
    let path = scratch(name).join("state.json");
    std::fs::write(&path, psi.to_json()).unwrap();
    let mut args = vec!["classify", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    kduncd(&args)
}

#[test]
fn classify_reports() {
    let out = classify(&StateVector::basis(5, 2).unwrap(), "basis", &[]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "Classical");
    assert_eq!(v["product"], 5);

    let comb = coset_classical_state(CosetSpec { d: 6, p: 2, a_shift: 1, b_shift: 3 }).unwrap();
    let v = stdout_json(&classify(&comb, "comb", &[]));
    assert_eq!(v["verdict"], "Classical");
    assert_eq!(v["product"], 6);
    assert_eq!(v["theorem4_agrees"], true);

    let third = Complex64::new(1.0, 0.0);
    let psi = StateVector::from_amplitudes(vec![third, third, third, Complex64::new(0.0, 0.0)]).unwrap();
    let v = stdout_json(&classify(&psi, "three", &[]));
    assert_eq!(v["verdict"], "Nonclassical");
    assert!(v["witness"].is_object());
    assert_eq!(v["theorem5_flag"], "nonclassical");

    assert_eq!(classify(&psi, "mismatch", &["--d", "5"]).status.code(), Some(2));
}

#[test]
fn malformed_state_file() {
    let path = scratch("bad").join("state.json");
    std::fs::write(&path, "{\"d\": 2}").unwrap();
    assert_eq!(kduncd(&["classify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn witness_command() {
    let dir = scratch("witness");
    for (na, nb, verdict) in [("2", "3", "Classical"), ("4", "4", "Nonclassical")] {
        let path = dir.join(format!("w{na}{nb}.json"));
        let out =
            kduncd(&["witness", "--d", "6", "--na", na, "--nb", nb, "--seed", "3", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(String::from_utf8(out.stderr).unwrap().contains(verdict));
        let v = stdout_json(&kduncd(&["classify", path.to_str().unwrap()]));
        assert_eq!(v["verdict"], verdict);
        assert_eq!(v["n_a"].as_u64().unwrap().to_string(), na);
        assert_eq!(v["n_b"].as_u64().unwrap().to_string(), nb);
    }
    let out = kduncd(&["witness", "--d", "8", "--na", "5", "--nb", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("hole"));
}

#[test]
fn verify_small_ranges() {
    for suite in ["T1", "C1", "T2", "T3", "L3"] {
        let out = kduncd(&["verify", suite, "--d", "2..7"]);
        assert!(out.status.success(), "{suite}");
    }
    let out = kduncd(&["verify", "T4", "--d", "2..6", "--samples", "50"]);
    assert!(out.status.success());
    let out = kduncd(&["verify", "T5", "--d", "2..5", "--pairs", "5", "--states", "20"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("pass"));
}

#[test]
fn verify_uses_cache_dir() {
    let dir = scratch("cache");
    let args = ["verify", "T2", "--d", "6..7", "--cache-dir", dir.to_str().unwrap()];
    assert!(kduncd(&args).status.success());
    let files = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(files, 2);
    assert!(kduncd(&args).status.success());
}
