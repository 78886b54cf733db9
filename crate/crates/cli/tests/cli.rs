use std::process::Command;

fn stokes(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stokes"))
        .args(args)
        .output()
        .expect("run stokes");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn thresholds_mode_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let (code, _, _) = stokes(&[
        "run",
        "--problem",
        "example1",
        "--mode",
        "thresholds",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["kind"], "thresholds");
    let rho_star = v["thresholds"]["rho_star"].as_f64().unwrap();
    assert!(rho_star <= 9.79, "{rho_star}");
}

#[test]
fn reports_are_deterministic() {
    let a = stokes(&["run", "--problem", "example2", "--mode", "thresholds"]).1;
    let b = stokes(&["run", "--problem", "example2", "--mode", "thresholds"]).1;
    assert_eq!(a, b);
}

#[test]
fn oracle_mode_is_labeled() {
    let (code, out, err) = stokes(&["run", "--problem", "example1", "--mode", "oracle"]);
    assert_eq!(code, 0);
    assert!(err.contains("NON-RIGOROUS"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["rigor"].as_str().unwrap().contains("NON-RIGOROUS"));
    let theta = v["theta_estimate"]["theta"][0].as_f64().unwrap();
    assert!((theta - 1.0486).abs() < 1e-3, "{theta}");
}

#[test]
fn usage_errors_exit_one() {
    let (code, out, _) = stokes(&["run", "--problem", "example3"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "invalid_input");
    assert_eq!(
        stokes(&["run", "--problem", "example2", "--mode", "refine"]).0,
        1
    );
    assert_eq!(
        stokes(&["run", "--problem", "example1", "--order", "2"]).0,
        1
    );
}

#[test]
fn gate_failures_exit_three() {
    let (code, out, _) = stokes(&[
        "run",
        "--problem",
        "example1",
        "--mode",
        "thresholds",
        "--max-iters",
        "2",
    ]);
    assert_eq!(code, 3);
    assert!(out.contains("search_exhausted"));
}

#[test]
fn integrator_failures_exit_four() {
    let (code, out, _) = stokes(&["run", "--problem", "example1", "--width-cap", "1e-12"]);
    assert_eq!(code, 4, "{out}");
    assert!(out.contains("wrapping_failure"));
}
