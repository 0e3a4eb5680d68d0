use std::process::{Command, Output};

use g2_bundle::formats;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2-bundle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all", "--seed", "42", "--samples", "200"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.contains("[PASS]")).count() >= 30);
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verify_unachievable_tolerance_fails() {
    let o = run(&["verify", "algebra", "--samples", "100", "--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn verify_json_schema() {
    let o = run(&["verify", "algebra", "--samples", "50", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "algebra");
    assert_eq!(v["seed"], 42);
    let check = &v["checks"][0];
    for key in ["name", "paper_ref", "residual", "tol", "pass"] {
        assert!(check.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "nope"])), 2);
    assert_eq!(code(&run(&["verify", "all", "--samples", "0"])), 2);
    assert_eq!(code(&run(&["verify", "all", "--tol", "-1"])), 2);
    assert_eq!(code(&run(&["sample", "0"])), 2);
    assert_eq!(code(&run(&["theta", "2", "0", "0", "0", "0", "0"])), 2);
    assert_eq!(code(&run(&["theta", "1", "0"])), 2);
    assert_eq!(code(&run(&["degree", "--fd-step", "0"])), 2);
    assert_eq!(code(&run(&[])), 2);
}

#[test]
fn theta_examples() {
    let o = run(&["theta", "1", "0", "0", "0", "0", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = &v["theta"]["rows"];
    assert_eq!(rows[1][2][0], 1.0);
    assert_eq!(rows[2][1][0], -1.0);

    let o = run(&[
        "theta",
        "0",
        "0",
        "1",
        "0",
        "0",
        "0",
        "--cross-check",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_diff"].as_f64().unwrap() < 1e-9);

    let o = run(&["theta", "-0.6", "0", "0", "0.8", "0", "0", "--cross-check"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("max entry difference"));
}

#[test]
fn theta_auto_normalizes_near_unit() {
    let o = run(&["theta", "1.0005", "0", "0", "0", "0", "0"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let o = run(&["theta", "1.01", "0", "0", "0", "0", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&[
            "sample",
            "1000",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().count(), 1001);
    assert_eq!(formats::read_csv(text.as_bytes()).unwrap().len(), 1000);

    let seq = run(&["sample", "50", "--seed", "7", "--sequential"]);
    let par = run(&["sample", "50", "--seed", "7"]);
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn sample_bad_path_exits_2() {
    let o = run(&["sample", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&[
        "verify",
        "all",
        "--samples",
        "50",
        "--seed",
        "3",
        "--format",
        "json",
    ]);
    let b = run(&[
        "verify",
        "all",
        "--samples",
        "50",
        "--seed",
        "3",
        "--format",
        "json",
        "--sequential",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn degree_runs() {
    let o = run(&["degree"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("degree = 2"));
    assert!(text.contains("signs = (+,+)") || text.contains("signs = (-,-)"));

    let o = run(&["degree", "--fd-step", "1e-3"]);
    assert!(stdout(&o).contains("degree = 2"));

    let o = run(&[
        "degree",
        "--value=0.999,0.03,-0.02,0.01,0.02,-0.01",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["preimages"].as_array().unwrap().len(), 2);
}
