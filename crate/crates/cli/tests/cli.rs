use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coapprox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, String) {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap(), text)
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect()
}

#[test]
fn classify_example_basis() {
    let (v, _) = json(&["classify", &fixture("example_basis.json")]);
    let c = &v["classification"];
    assert_eq!(c["coproximinal"], false);
    assert_eq!(c["p"], 4);
    assert_eq!(c["m"], 3);
    assert_eq!(v["star_report"]["satisfying"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn classify_standard_basis() {
    let (v, _) = json(&["classify", &fixture("standard_3.json")]);
    assert_eq!(v["classification"]["co_chebyshev"], true);
}

#[test]
fn dependent_basis_is_an_input_error() {
    let out = run(&["classify", &fixture("duplicate_rows.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dependent basis"));
}

#[test]
fn solve_case_two_and_three() {
    let (v, _) = json(&["solve", &fixture("example_t2.json")]);
    assert_eq!(v["solution"]["kind"], "Unique");
    assert_eq!(
        strings(&v["solution"]["diagonal"]),
        ["3", "1", "4", "1", "-3", "1", "2"]
    );
    let (v, _) = json(&["solve", &fixture("example_t3.json")]);
    assert_eq!(v["solution"]["kind"], "Empty");
}

#[test]
fn solve_case_one_family_ranges() {
    let (v, _) = json(&["solve", &fixture("example_t1.json")]);
    assert_eq!(v["solution"]["kind"], "Family");
    let first = &v["solution"]["diag_ranges"][0];
    assert_eq!(
        (first["lo"].as_str(), first["hi"].as_str()),
        (Some("1/2"), Some("11/2"))
    );
}

#[test]
fn linf_without_target_only_classifies() {
    for cmd in ["solve", "linf"] {
        let (v, _) = json(&[cmd, &fixture("linf_y1.json")]);
        assert_eq!(v["classification"]["coproximinal"], true);
        assert!(v.get("solution").is_none());
        assert!(v.get("system").is_none());
    }
    let (v, _) = json(&["linf", &fixture("linf_y2.json")]);
    assert_eq!(v["classification"]["coproximinal"], false);
}

#[test]
fn linf_command_rejects_diag_files() {
    let out = run(&["linf", &fixture("example_t2.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let problem = fixture("example_t2.json");
    let ok = run(&[
        "verify",
        &problem,
        &fixture("case2_candidate.json"),
        "--seed",
        "7",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&[
        "verify",
        &problem,
        &fixture("case2_perturbed.json"),
        "--seed",
        "7",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["oracle"]["verdict"], "Fail");
    assert_eq!(
        strings(&v["oracle"]["orthogonality"]["failing_witness"]["direction"]),
        ["1", "-17/52", "-25/52"]
    );
    let mismatch = run(&[
        "verify",
        &problem,
        &fixture("standard_3_wrong_size.json"),
        "--seed",
        "7",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn verify_requires_a_seed() {
    let out = run(&[
        "verify",
        &fixture("example_t2.json"),
        &fixture("case2_candidate.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn target_dimension_mismatch_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("coapprox-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mismatch.json");
    std::fs::write(
        &path,
        r#"{"n": 2, "basis": [[1, 0]], "target": [[1, 2], [3, 4], [5, 6]]}"#,
    )
    .unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&path, r#"{"n": 2, "basis": [[1, 0, 0]]}"#).unwrap();
    assert_eq!(run(&["classify", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["classify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bad_tolerance_is_rejected() {
    let out = run(&["--tol-w=-1", "solve", &fixture("example_t2.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_is_canonical_and_deterministic() {
    let dir = std::env::temp_dir().join(format!("coapprox-cand-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let candidate = dir.join("candidate.json");
    std::fs::write(
        &candidate,
        r#"{"diagonal": ["1/2", "7/2", 4, 1, "-1/2", "7/2", 2]}"#,
    )
    .unwrap();
    let problem = fixture("example_t1.json");
    let candidate = candidate.to_string_lossy().into_owned();
    for args in [
        vec!["solve", &problem],
        vec!["verify", &problem, &candidate, "--seed", "3"],
    ] {
        let (v, first) = json(&args);
        let (_, second) = json(&args);
        assert_eq!(first, second);
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", first);
    }
}

#[test]
fn text_output() {
    let out = run(&["--text", "solve", &fixture("example_t2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("coproximinal = false"));
    assert!(text.contains("solution: Unique"));
    assert!(text.contains("diagonal = (3, 1, 4, 1, -3, 1, 2)"));
}
