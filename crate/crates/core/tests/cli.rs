use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_effdyn"))
}

fn preset(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "presets", name].iter().collect()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fig2_run_shape_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let (code, _, err) = run(&["run", s(&preset("fig2.json")), "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "time,P0");
    assert_eq!(lines.len(), 601);
    assert!(!csv.contains('\r'));
    // 17 significant digits
    let first = lines[1].split(',').nth(1).unwrap();
    assert_eq!(first.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);

    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "run");
    assert_eq!(m["fingerprint"][0]["dims"]["effective"], 48);
    assert_eq!(m["fingerprint"][0]["n"], 6);
    assert_eq!(m["config"]["schema_version"], 1);
    assert!(m["residual_log"]["truncated"].as_u64().unwrap() > 0);
}

#[test]
fn output_is_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        assert_eq!(run(&["run", s(&preset("fig4.json")), "--out", s(p)]).0, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // worker count does not change the result
    let c = dir.path().join("c.csv");
    let st = bin().env("EFFDYN_THREADS", "1").args(["run", s(&preset("fig4.json")), "--out", s(&c)]).output().unwrap().status;
    assert!(st.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn time_points_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("short.csv");
    assert_eq!(run(&["run", s(&preset("fig2.json")), "--time-points", "11", "--out", s(&out)]).0, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 12);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ \"schema_version\": 1, ");
    assert_eq!(run(&["run", s(&bad)]).0, 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["run", s(&missing)]).0, 2);

    let big = write(
        dir.path(),
        "big.json",
        r#"{ "schema_version": 1,
             "scenario": { "kind": "itc", "profile": { "kind": "sine_cavity", "n": 30, "params": { "g": 1.0 } },
                           "nbar": 1.0, "field_dim": 4, "engine": { "kind": "exact" } },
             "time": { "end": 1.0, "points": 3 } }"#,
    );
    let (code, _, err) = run(&["run", s(&big), "--out", s(&dir.path().join("big.csv"))]);
    assert_eq!(code, 3);
    assert!(err.contains("guard"), "{err}");

    let (code, _, err) = run(&["sweep", s(&preset("fig2.json")), "--axis", "temperature", "--values", "1,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("axis"), "{err}");
    assert_eq!(run(&["compare", s(&preset("fig9.json"))]).0, 2);
    let st = bin().env("EFFDYN_THREADS", "zero").args(["run", s(&preset("fig2.json"))]).output().unwrap().status;
    assert_eq!(st.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn compare_reports_dims_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    assert_eq!(run(&["compare", s(&preset("fig2.json")), "--out", s(&out)]).0, 0);
    let header = std::fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "time,P0_exact,P0_effective,P0_abs_error");
    let sum: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cmp.summary.json")).unwrap()).unwrap();
    assert_eq!(sum["dims"]["exact"], 448);
    let e = sum["errors"][0]["max_abs_error"].as_f64().unwrap();
    assert!(e > 0.0 && e < 0.05);
}

#[test]
fn homogeneous_compare_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(preset("fig2.json")).unwrap().replace(
        "\"params\": { \"g\": 1.0 } }",
        "\"params\": { \"g\": 1.0 }, \"homogeneous\": true }",
    );
    let cfg = write(dir.path(), "hom.json", &text);
    let out = dir.path().join("hom.csv");
    assert_eq!(run(&["compare", s(&cfg), "--out", s(&out)]).0, 0);
    let sum: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("hom.summary.json")).unwrap()).unwrap();
    assert!(sum["errors"][0]["max_abs_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn sweep_rows_and_relative_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw.csv");
    let (code, _, err) = run(&["sweep", s(&preset("fig2.json")), "--axis", "max_row", "--values", "1,2,3", "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let e = header.iter().position(|h| *h == "max_abs_error_P0").unwrap();
    assert!(rows[1][e] <= rows[0][e] && rows[2][e] <= rows[1][e]);

    let three = write(
        dir.path(),
        "three.json",
        r#"{ "schema_version": 1,
             "scenario": { "kind": "qd_three_state",
                           "profile": { "kind": "gaussian_dot", "n": 100, "params": { "A": 1.0, "r0": 1.0 } },
                           "defect": { "kind": "lorentzian", "j0": 1, "Gamma": 5.0 } },
             "time": { "end": 2.0, "points": 50, "unit": "transfer_time" } }"#,
    );
    let out = dir.path().join("j0.csv");
    assert_eq!(run(&["sweep", s(&three), "--axis", "j0", "--values", "1,N/2,N", "--out", s(&out)]).0, 0);
    let j0: Vec<f64> = std::fs::read_to_string(&out).unwrap().lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(j0, vec![1.0, 50.0, 100.0]);
}

#[test]
fn probabilities_stay_in_range() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig3.json", "fig9.json", "fig10.json"] {
        let out = dir.path().join(name.replace(".json", ".csv"));
        assert_eq!(run(&["run", s(&preset(name)), "--out", s(&out)]).0, 0);
        let csv = std::fs::read_to_string(&out).unwrap();
        for line in csv.lines().skip(1) {
            for x in line.split(',').skip(1) {
                let v: f64 = x.parse().unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{name}: {v}");
            }
        }
    }
}
