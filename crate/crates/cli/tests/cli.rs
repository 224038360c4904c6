use std::process::{Command, Output};

use serde_json::Value;

fn e3(args: &[&str]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_e3"))
        .args(args)
        .output()
        .expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    (out, v)
}

#[test]
fn degree_with_generic_second_vector() {
    let (out, v) = e3(&["degree", "--weights2", "2,7,19,50"]);
    assert!(out.status.success());
    assert_eq!(v["degree"], 168208);
    assert_eq!(v["flags"], 24);
    assert_eq!(v["isolated"], 1728);
    assert_eq!(v["lines"], 120);
    assert_eq!(v["per_flag"].as_array().unwrap().len(), 24);
}

#[test]
fn degree_output_is_reproducible() {
    let args = ["degree", "--skip-verify", "--weights2", "2,7,19,50"];
    assert_eq!(e3(&args).0.stdout, e3(&args).0.stdout);
}

#[test]
fn non_generic_vector_is_rejected_with_a_suggestion() {
    let (out, v) = e3(&["degree", "--skip-verify"]);
    assert!(!out.status.success());
    assert!(v["error"].as_str().unwrap().contains("non-generic"));
    let s: Vec<String> = v["suggested_weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect();
    let (out, v) = e3(&["degree", "--skip-verify", "--weights2", &s.join(",")]);
    assert!(out.status.success());
    assert_eq!(v["degree"], 168208);
}

#[test]
fn fixed_loci_census() {
    let (out, v) = e3(&["fixed-loci", "--flag", "0123"]);
    assert!(out.status.success());
    assert_eq!(
        (v["isolated"].as_u64(), v["lines"].as_u64()),
        (Some(72), Some(5))
    );
    assert_eq!(v["loci"].as_array().unwrap().len(), 77);
}

#[test]
fn bad_flag_label_fails() {
    let (out, _) = e3(&["fixed-loci", "--flag", "0113"]);
    assert!(!out.status.success());
}

#[test]
fn verify_and_oracles_pass() {
    for cmd in ["verify", "oracles"] {
        let (out, v) = e3(&[cmd]);
        assert!(out.status.success(), "{cmd}: {v}");
    }
}

#[test]
fn omega_of_the_orbit_representative() {
    let (out, v) = e3(&[
        "omega",
        "--pair",
        "x0^2*x3-x0*x1*x2+x1^3/3",
        "x0*x2-x1^2/2",
        "x0",
    ]);
    assert!(out.status.success());
    assert_eq!(v["dx0"], "-x0*x2*x3 + 2*x1^2*x3 - x1*x2^2");
    assert_eq!(v["dx1"], "-3*x0*x1*x3 + 2*x0*x2^2");
    assert_eq!(v["dx2"], "3*x0^2*x3 - x0*x1*x2");
    assert_eq!(v["dx3"], "-2*x0^2*x2 + x0*x1^2");
}

#[test]
fn omega_reports_the_failing_coefficient() {
    let (out, v) = e3(&["omega", "--pair", "x0^2*x3", "x0*x2", "x1"]);
    assert!(!out.status.success());
    assert_eq!(v["index"], 0);
    assert_eq!(v["coefficient"], "-x0^2*x2*x3");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("e3-out-{}", std::process::id()));
    let path = dir.with_extension("json");
    let status = Command::new(env!("CARGO_BIN_EXE_e3"))
        .args(["oracles", "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);
    std::fs::remove_file(path).unwrap();
}
