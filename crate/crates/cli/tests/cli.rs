use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbit-moduli"))
        .args(args)
        .env_remove("ORBIT_MODULI_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_euler_suite_passes() {
    let out = run(&["verify", "--suite", "euler", "--n", "3", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["orbit"]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_thompson_scalar_case() {
    let out = run(&["verify", "--suite", "thompson", "--n", "1", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["certificate_failures"], 0);
}

#[test]
fn verify_weyl_marks_shift_violation_expected() {
    let out = run(&["verify", "--suite", "weyl", "--p", "3", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let shift = v["shift"].as_array().unwrap();
    let entry = shift.iter().find(|e| e["report"]["label"] == "j=2,k=0").unwrap();
    assert_eq!(entry["report"]["verdict"], "Violated");
    assert_eq!(entry["status"], "EXPECTED");
    assert!(shift.iter().all(|e| e["status"] != "FAILED"));
}

#[test]
fn verify_output_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for jobs in ["1", "3"] {
        let records = dir.path().join(format!("records{jobs}.jsonl"));
        let out = run(&[
            "verify",
            "--suite",
            "all",
            "--trials",
            "12",
            "--jobs",
            jobs,
            "--records",
            records.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        bodies.push((out.stdout, std::fs::read(&records).unwrap()));
    }
    assert_eq!(bodies[0], bodies[1]);
    let lines = String::from_utf8(bodies[0].1.clone()).unwrap();
    assert!(lines.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}

#[test]
fn seed_env_matches_flag() {
    let flag = run(&["verify", "--suite", "ineq", "--trials", "8", "--seed", "99"]);
    let env = Command::new(env!("CARGO_BIN_EXE_orbit-moduli"))
        .args(["verify", "--suite", "ineq", "--trials", "8"])
        .env("ORBIT_MODULI_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(json(&env)["seed"], 99);
}

#[test]
fn csv_aggregate_header() {
    let out = run(&["verify", "--suite", "ineq", "--trials", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("name,p,n,trials,reports,min_margin,max_ratio,holds,equality,violated\n"));
}

#[test]
fn counterexamples_confirm() {
    for args in [
        &["counterexample", "parallelogram", "--x", "2"][..],
        &["counterexample", "parallelogram", "--x", "-1"],
        &["counterexample", "qsym", "--p", "3"],
        &["counterexample", "shift", "--p", "3"],
        &["counterexample", "sym-thompson"],
        &["counterexample", "four-isometry", "--n", "2"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["verdict"], "ConfirmedCounterexample", "{args:?}");
    }
}

#[test]
fn sym_thompson_prints_norms() {
    let v = json(&run(&["counterexample", "sym-thompson"]));
    let q = v["quantities"].as_array().unwrap();
    let get = |name: &str| q.iter().find(|x| x["name"] == name).unwrap()["value"].as_f64().unwrap();
    assert!((get("norm_sym_x_plus_y") - 3.0 / 2f64.sqrt()).abs() < 1e-10);
    assert!((get("norm_sym_x") - 7.0 / (2.0 * 5f64.sqrt())).abs() < 1e-10);
    assert!((get("norm_sym_y") - 0.5).abs() < 1e-10);
}

#[test]
fn bad_parallelogram_scalar_is_usage_error() {
    assert_eq!(run(&["counterexample", "parallelogram", "--x", "0"]).status.code(), Some(2));
}

fn write_matrices(dir: &std::path::Path, body: &str) -> String {
    let path = dir.join("in.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decompose_fourier3_on_identities() {
    let dir = tempfile::tempdir().unwrap();
    let id = r#"{"rows":2,"cols":2,"re":[1,0,0,1],"im":[0,0,0,0]}"#;
    let input = write_matrices(dir.path(), &format!("[{id},{id},{id}]"));
    let cert_path = dir.path().join("cert.json");
    let out = run(&["decompose", "euler-fourier3", "--input", &input, "--output", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(cert["relation"], "equality");
    assert!(cert["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn decompose_thompson_rect_two_terms() {
    let dir = tempfile::tempdir().unwrap();
    let a = r#"{"rows":5,"cols":2,"re":[1,0,0,1,1,1,0,2,3,0],"im":[0,1,0,0,0,0,1,0,0,0]}"#;
    let b = r#"{"rows":5,"cols":2,"re":[0,1,2,0,0,0,1,1,0,1],"im":[0,0,0,1,1,0,0,0,0,0]}"#;
    let input = write_matrices(dir.path(), &format!("[{a},{b}]"));
    let out = run(&["decompose", "thompson-rect", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = json(&out);
    assert_eq!(cert["relation"], "domination");
    assert_eq!(cert["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn decompose_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrices(dir.path(), r#"{"rows":2,"cols":2,"re":[1],"im":[0]}"#);
    assert_eq!(run(&["decompose", "partitioned-pythagoras", "--input", &input]).status.code(), Some(2));
    let input = write_matrices(dir.path(), "not json");
    assert_eq!(run(&["decompose", "euler-hadamard", "--input", &input]).status.code(), Some(2));
}

#[test]
fn decompose_reports_failed_reverification() {
    let dir = tempfile::tempdir().unwrap();
    let m = r#"{"rows":2,"cols":2,"re":[2,1,1,3],"im":[0,0.5,-0.5,0]}"#;
    let input = write_matrices(dir.path(), m);
    let out = run(&["decompose", "partitioned-pythagoras", "--input", &input, "--iso-defect", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("isometry defect"));
}

#[test]
fn explore_p2_ratios_are_one() {
    let out = run(&["explore", "--p", "2", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &json(&out)[0];
    for key in ["sampled_ratio", "climbed_ratio", "equal_triple_ratio", "simplex_ratio"] {
        assert!((s[key].as_f64().unwrap() - 1.0).abs() < 1e-12, "{key}");
    }
    assert!(s["note"].as_str().unwrap().contains("evidence-grade"));
}

#[test]
fn explore_exits_three_on_violation() {
    // the rank-one simplex triple beats the conjectured constant at p = 2.5
    let out = run(&["explore", "--p", "2.5", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)[0]["violation"], true);
}

#[test]
fn explore_p3_within_constant() {
    let out = run(&["explore", "--p", "3", "--trials", "500", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)[0]["extremal_ratio"].as_f64().unwrap() <= 1.25 + 1e-9);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--psd-slack", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
