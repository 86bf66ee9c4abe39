mod common;

use serde_json::Value;
use std::process::{Command, Output};

fn osculant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osculant"))
        .args(args)
        .env("OSCULANT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn roots_of_circle_center() {
    let out = osculant(&["roots", "1,0,0", "--curve", "trig_convex:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["total"], 0);
}

#[test]
fn roots_with_negative_coordinates() {
    let out = osculant(&["roots", "-1,0,3", "--curve", "trig_convex:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["total"], 2);
}

#[test]
fn components_on_trig_quartic() {
    let out = osculant(&["components", "--curve", "trig_convex:4", "--seed", "7", "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["components"], 3);
    assert_eq!(v["seed"], 7);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["components", "histogram", "n", "samples", "seed"]);
}

#[test]
fn check_convex_rejects_non_convex_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, common::non_convex_space_json()).unwrap();
    let out = osculant(&[
        "check-convex",
        "--curve",
        spec.to_str().unwrap(),
        "--trials",
        "3000",
        "--samples",
        "150",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["convex"], false);
    assert!(v["sampling"]["witness"].is_object());
}

#[test]
fn check_convex_accepts_model() {
    let out = osculant(&["check-convex", "--curve", "rational_normal:3", "--trials", "500", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["convex"], true);
}

#[test]
fn project_reports_recursion() {
    let out = osculant(&["project", "0.4", "-1.2", "--curve", "trig_convex:5", "--trials", "500", "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["projected_dim"], 3);
    assert_eq!(v["recursion"]["mismatches"], 0);
}

#[test]
fn hull_reports_center_and_probes() {
    let out = osculant(&["hull", "--curve", "trig_convex:2", "--probe", "1,0,0", "--probe", "1,3,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["probes"][0]["member"], true);
    assert_eq!(v["probes"][1]["member"], false);
    assert!((v["center"][0].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn mesh_obj_counts_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.obj");
    let b = dir.path().join("b.obj");
    for path in [&a, &b] {
        let out = osculant(&[
            "mesh",
            "--curve",
            "rational_normal:3",
            "--t-steps",
            "256",
            "--ruling-steps",
            "64",
            "--format",
            "obj",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 256 * 64);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 255 * 63);
}

#[test]
fn mesh_csv_header_and_obj_rejection() {
    let out = osculant(&["mesh", "--curve", "trig_convex:2", "--t-steps", "8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,x0,x1,x2");
    let out = osculant(&["mesh", "--curve", "trig_convex:4", "--format", "obj"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn transport_preserves_roots() {
    let out = osculant(&["transport", "0.3,0.2,-0.5,0.1", "rational_normal:3", "--curve", "trig_convex:3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["roots_preserved"], true);
    assert!(v["moment_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(osculant(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(osculant(&["roots", "1,0,0"]).status.code(), Some(3));
    assert_eq!(osculant(&["roots", "1,x,0", "--curve", "trig_convex:2"]).status.code(), Some(3));
    assert_eq!(osculant(&["roots", "1,0", "--curve", "trig_convex:2"]).status.code(), Some(3));
    assert_eq!(osculant(&["roots", "1,0,0", "--curve", "nope:2"]).status.code(), Some(3));
}
