use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn gsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsd"))
        .args(args)
        .env("GSD_THREADS", "1")
        .output()
        .expect("gsd runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gsd(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON from {args:?}: {e}\nstderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    assert_eq!(v["schema"], 1);
    (out.status.code().expect("exit code"), v)
}

fn order_zero(report: &Value, n: usize) -> bool {
    report["orders"][n]["zero"].as_bool().expect("zero flag")
}

#[test]
fn verify_builtin_and_fixtures() {
    let (code, v) = json(&["verify", "--zk", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let (code, _) = json(&["verify", "--diagram", &fixture("z3.json")]);
    assert_eq!(code, 0);
    let (code, v) = json(&["verify", "--diagram", &fixture("bad.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    let f = &v["failures"][0];
    assert!(f["identity"].as_str().unwrap().starts_with("psi"));
    assert_ne!(f["left"], f["right"]);
    let text = gsd(&["verify", "--diagram", &fixture("bad.json")]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("fails at (v, v)"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--zk", "0"],
        vec!["verify"],
        vec!["verify", "--zk", "3", "--diagram", "x.json"],
        vec!["verify", "--diagram", "/does/not/exist.json"],
        vec!["mc", "--zk", "4", "--classical", "i=4"],
        vec!["mc", "--zk", "4", "--classical", "j=2"],
        vec!["mc", "--zk", "4", "--quantize", "eta=canonical", "--order", "3"],
        vec!["verdict", "--k", "4", "--i", "0"],
        vec!["suite", "--criterion", "10"],
    ] {
        assert_eq!(gsd(&args).status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_gsd"))
        .args(["verify", "--zk", "3"])
        .env("GSD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_residuals() {
    let (code, v) = json(&["mc", "--zk", "4", "--classical", "i=2", "--order", "2"]);
    assert_eq!(code, 0);
    assert!((0..=2).all(|n| order_zero(&v, n)));
    let (code, v) = json(&["mc", "--zk", "4", "--quantize", "eta=canonical", "--order", "2"]);
    assert_eq!(code, 0);
    assert!((0..=2).all(|n| order_zero(&v, n)));
    let (code, v) = json(&[
        "mc",
        "--zk",
        "4",
        "--classical",
        "i=2",
        "--quantize",
        "eta=canonical",
        "--order",
        "2",
    ]);
    assert_eq!(code, 1);
    assert!(order_zero(&v, 0) && order_zero(&v, 1));
    assert!(!order_zero(&v, 2));
    let comps = v["orders"][2]["components"].as_array().unwrap();
    let av = comps.iter().find(|c| c["component"] == "a.V").unwrap();
    // (a, b, c, d) = (1, 0, 0, 1) gives t_2 z^{-1+2}.
    let row = av["table"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["inputs"] == serde_json::json!(["zeta", "v"]))
        .expect("(ζ, v) row");
    assert_eq!(row["value"], "t2*z");
    assert!(comps.iter().filter(|c| c["component"] != "a.V").all(|c| c["zero"] == true));
}

#[test]
fn mc_with_a_bivector_file() {
    let dir = std::env::temp_dir().join(format!("gsd-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("eta.json");
    std::fs::write(&good, r#"{ "dim": 2, "coeffs": { "1,2": "2*z*u" } }"#).unwrap();
    let (code, _) = json(&["mc", "--zk", "3", "--quantize", &format!("eta={}", good.display()), "--order", "2"]);
    assert_eq!(code, 0);
    // z^2 ∂_z∧∂_u does not extend over V for k = 3.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{ "dim": 2, "coeffs": { "1,2": "z^2" } }"#).unwrap();
    let out = gsd(&["mc", "--zk", "3", "--quantize", &format!("eta={}", bad.display())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_on_a_bad_diagram() {
    let (code, v) = json(&["mc", "--diagram", &fixture("bad.json"), "--order", "1"]);
    assert_eq!(code, 1);
    assert!(!order_zero(&v, 0));
}

#[test]
fn verdicts() {
    let (code, v) = json(&["verdict", "--k", "4", "--i", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "obstructed");
    assert_eq!(v["bivector_frameU"], "-t2*z^-1");
    assert_eq!(v["cech"]["basis_coords"]["z^-1"], "-t2");
    let (_, v) = json(&["verdict", "--k", "3", "--i", "1"]);
    assert_eq!(v["verdict"], "unobstructed");
    assert_eq!(v["cech"]["trivial"], true);
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "mc",
        "--zk",
        "4",
        "--classical",
        "i=2",
        "--quantize",
        "eta=canonical",
        "--format",
        "json",
    ];
    let a = gsd(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_gsd")).args(args).env("GSD_THREADS", "2").output().unwrap().stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let a = gsd(&["suite", "--seed", "7", "--criterion", "1", "--format", "json"]).stdout;
    let b = gsd(&["suite", "--seed", "7", "--criterion", "1", "--format", "json"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn full_suite() {
    let (code, v) = json(&["suite", "--seed", "7"]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["passed"], 9);
    assert_eq!(v["failed"], 0);
}
