//! End-to-end tests for the `cara` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cara_core::kappa::{Family, VPolytope};
use cara_core::point::Point;
use serde_json::json;

fn cara(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cara"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn singleton(coords: &[i64]) -> VPolytope {
    VPolytope::new(vec![Point::from_ints(coords)]).unwrap()
}

fn seven_point_family() -> Family {
    let members = [
        [0, 0],
        [4, 0],
        [0, 4],
        [4, 4],
        [2, 1],
        [1, 2],
        [3, 3],
    ]
    .iter()
    .map(|c| singleton(&c[..]))
    .collect();
    Family::new(2, members).unwrap()
}

#[test]
fn generate_is_deterministic_in_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("gen.json");
    write(
        &spec,
        r#"{"kind": "randomPoints", "n": 2, "count": 12, "range": 5}"#,
    );
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let out_c = dir.path().join("c");
    for (out, seed) in [(&out_a, "7"), (&out_b, "7"), (&out_c, "8")] {
        let r = cara(&[
            "generate",
            "--spec",
            spec.to_str().unwrap(),
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a = fs::read(out_a.join("instance.json")).unwrap();
    let b = fs::read(out_b.join("instance.json")).unwrap();
    let c = fs::read(out_c.join("instance.json")).unwrap();
    assert_eq!(a, b, "same seed must reproduce the instance byte for byte");
    assert_ne!(a, c, "different seeds should give different instances");
}

#[test]
fn run_tverberg_then_verify_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let instance = json!({
        "family": seven_point_family(),
        "r": 2,
        "kappa": "auto",
    });
    write(
        &dir.path().join("points.json"),
        &serde_json::to_string_pretty(&instance).unwrap(),
    );
    write(
        &dir.path().join("run.json"),
        r#"{"experiments": [
            {"id": "tv1", "task": "tverberg", "inputPath": "points.json"}
        ]}"#,
    );
    let out = dir.path().join("out");
    let r = cara(&[
        "run",
        "--spec",
        dir.path().join("run.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    let mut lines = report.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,task,result,certificate,iterations,wall_ms"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("tv1,tverberg,valid=true,"), "row: {row}");
    assert!(out.join("tv1.tverberg.json").is_file());

    // Round-trip the certificate through the verify subcommand.
    let verify_spec = json!({
        "kind": "tverberg",
        "instancePath": "points.json",
        "certificatePath": out.join("tv1.tverberg.json"),
    });
    write(
        &dir.path().join("verify.json"),
        &verify_spec.to_string(),
    );
    let v = cara(&[
        "verify",
        "--spec",
        dir.path().join("verify.json").to_str().unwrap(),
    ]);
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stderr));
    assert!(String::from_utf8_lossy(&v.stdout).contains("valid=true"));
}

#[test]
fn run_sarkaria_sweep_reports_full_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let family = Family::new(
        1,
        vec![
            VPolytope::new(vec![Point::from_ints(&[-1]), Point::from_ints(&[0])]).unwrap(),
            VPolytope::new(vec![Point::from_ints(&[0]), Point::from_ints(&[1])]).unwrap(),
            VPolytope::new(vec![Point::from_ints(&[-1]), Point::from_ints(&[1])]).unwrap(),
        ],
    )
    .unwrap();
    write(
        &dir.path().join("family.json"),
        &serde_json::to_string(&family).unwrap(),
    );
    write(
        &dir.path().join("run.json"),
        r#"{"id": "sk1", "task": "sarkariaCheck", "r": 2, "inputPath": "family.json"}"#,
    );
    let out = dir.path().join("out");
    let r = cara(&[
        "run",
        "--spec",
        dir.path().join("run.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    // Three members, each with two vertices and two part tags after the
    // lift: 4^3 representative systems, all equivalent.
    assert!(report.contains("sk1,sarkariaCheck,cases=64;equivalent=64,"), "{report}");
}

#[test]
fn run_convm_membership_row() {
    let dir = tempfile::tempdir().unwrap();
    let instance = json!({
        "set": {
            "kind": "pointCloud",
            "points": [["0", "0"], ["3", "0"], ["0", "3"]],
        },
        "point": ["1", "1"],
    });
    write(
        &dir.path().join("q.json"),
        &instance.to_string(),
    );
    write(
        &dir.path().join("run.json"),
        r#"{"id": "q1", "task": "convm", "m": 3, "inputPath": "q.json"}"#,
    );
    let out = dir.path().join("out");
    let r = cara(&[
        "run",
        "--spec",
        dir.path().join("run.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(report.contains("q1,convm,member=true,"), "{report}");
}

#[test]
fn malformed_spec_fails_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    write(&spec, r#"{"experiments": [{"id": 42}]}"#);
    let out = dir.path().join("out");
    let r = cara(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!r.status.success());
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert!(stderr.contains("bad.json"), "stderr: {stderr}");
}

#[test]
fn render_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let instance = json!({
        "family": seven_point_family(),
        "r": 2,
        "kappa": "auto",
    });
    write(
        &dir.path().join("points.json"),
        &serde_json::to_string(&instance).unwrap(),
    );
    write(
        &dir.path().join("render.json"),
        r#"{"instancePath": "points.json"}"#,
    );
    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");
    for svg in [&svg_a, &svg_b] {
        let r = cara(&[
            "render",
            "--spec",
            dir.path().join("render.json").to_str().unwrap(),
            "--out",
            svg.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a = fs::read(&svg_a).unwrap();
    let b = fs::read(&svg_b).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8_lossy(&a).starts_with("<svg"));
}

#[test]
fn render_rejects_non_planar_instances() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("cloud.json"),
        r#"{"kind": "pointCloud", "points": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "1"]]}"#,
    );
    write(
        &dir.path().join("render.json"),
        r#"{"instancePath": "cloud.json"}"#,
    );
    let r = cara(&[
        "render",
        "--spec",
        dir.path().join("render.json").to_str().unwrap(),
        "--out",
        dir.path().join("x.svg").to_str().unwrap(),
    ]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("dimension 2"));
}
