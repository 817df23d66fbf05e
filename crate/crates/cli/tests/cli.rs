//! End-to-end runs of the `gwharvest` binary.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn gwharvest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwharvest")).args(args).env_remove("GWHARVEST_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// `name = value` lines of `point`.
fn point_values(o: &Output) -> HashMap<String, String> {
    stdout(o).lines().filter_map(|l| l.split_once(" = ")).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn csv_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().map(String::from).collect()
}

#[test]
fn point_at_zero_gap() {
    let o = gwharvest(&["point", "--Omega_sigma", "0", "--D_sigma", "2", "--omega_sigma", "2", "--A", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let p: f64 = point_values(&o)["p_norm"].parse().unwrap();
    assert_eq!(format!("{p:.6}"), "0.079577");
}

#[test]
fn point_resonant_correction_is_negative() {
    let o = gwharvest(&[
        "point",
        "--Omega_sigma",
        "1",
        "--D_sigma",
        "1",
        "--omega_sigma",
        "2",
        "--t0_sigma",
        "0",
        "--A",
        "0.05",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let theta: f64 = point_values(&o)["theta_gw"].parse().unwrap();
    assert!(theta < 0.0);
    assert_eq!(point_values(&o)["status"], "ok");
}

#[test]
fn point_rejects_zero_separation() {
    let o = gwharvest(&["point", "--D_sigma", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvalidGeometry"), "{}", stderr(&o));
}

#[test]
fn point_warnings_go_to_stderr() {
    let o = gwharvest(&["point", "--A", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    assert!(!stdout(&o).contains("warning"));
}

#[test]
fn point_json() {
    let o = gwharvest(&["point", "--Omega_sigma", "1", "--D_sigma", "2", "--A", "0.05", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    assert!(v["p_norm"].as_f64().unwrap() > 0.0);
    assert_eq!(v["D_sigma"].as_f64(), Some(2.0));
}

#[test]
fn point_equals_sweep_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    let fixed = ["--Omega_sigma", "0.7", "--D_sigma", "1.3", "--t0_sigma", "0.4", "--A", "0.03"];
    let mut args = vec!["sweep", "--axis", "omega_sigma:2.1:3:2", "-o", csv.to_str().unwrap()];
    args.extend(fixed);
    assert_eq!(gwharvest(&args).status.code(), Some(0));
    let lines = csv_lines(&csv);
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();

    let mut args = vec!["point", "--omega_sigma", "2.1"];
    args.extend(fixed);
    let point = point_values(&gwharvest(&args));
    for (name, value) in header.iter().zip(&row) {
        assert_eq!(point[*name], *value, "column {name}");
    }
}

#[test]
fn sweep_writes_one_line_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = gwharvest(&[
            "sweep",
            "--axis",
            "omega_sigma:0.2:8:101",
            "--Omega_sigma",
            "1",
            "--D_sigma",
            "2",
            "--t0_sigma",
            "0",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(path).unwrap()
    };
    let first = run("a.csv");
    assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 102);
    assert_eq!(first, run("b.csv"));
}

#[test]
fn sweep_threads_do_not_change_output() {
    let args = ["sweep", "--axis", "Omega_sigma:-1:1:7", "--axis", "D_sigma:0.5:3:5", "--A", "0.05"];
    let one = gwharvest(&[&["--threads", "1"], &args[..]].concat());
    let many = gwharvest(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(stdout(&one).lines().count(), 36);
}

#[test]
fn sweep_keeps_bad_points() {
    let o = gwharvest(&["sweep", "--axis", "D_sigma:0:1:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with("InvalidGeometry"));
}

#[test]
fn sweep_rejects_malformed_axes() {
    for axis in ["bogus:0:1:10", "omega_sigma:1:0:10", "omega_sigma:0:1:1", "omega_sigma:0:1"] {
        let o = gwharvest(&["sweep", "--axis", axis]);
        assert_eq!(o.status.code(), Some(2), "{axis}");
    }
    let o = gwharvest(&["sweep", "--axis", "A:0:0.1:2", "--axis", "A:0:0.1:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn figure_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("figs");
    let o = gwharvest(&["figure", "fig2", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(csv_lines(&out.join("fig2.csv")).len(), 1 + 101 * 4 * 2);
    let svg = std::fs::read_to_string(out.join("fig2.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 8);
}

#[test]
fn figure_fig1a_is_minkowski() {
    let dir = tempfile::tempdir().unwrap();
    let o = gwharvest(&["figure", "fig1a", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("fig1a.svg")).unwrap();
    assert!(svg.contains("fixed: A = 0,"));
    let lines = csv_lines(&dir.path().join("fig1a.csv"));
    assert_eq!(lines.len(), 1 + 61 * 61);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(4) == Some("0")));
}

#[test]
fn figure_uses_the_environment_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gwharvest"))
        .args(["figure", "fig3"])
        .env("GWHARVEST_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("fig3.csv").exists() && dir.path().join("fig3.svg").exists());
}

#[test]
fn figure_rejects_unknown_presets() {
    let o = gwharvest(&["figure", "fig9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_minimal_grid() {
    let o = gwharvest(&["verify", "--grid", "minimal"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_unreachable_tolerance_fails_clearly() {
    let o = gwharvest(&["verify", "--grid", "minimal", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL"));
    assert!(text.contains("expected to fail"));
}

#[test]
fn verify_json() {
    let o = gwharvest(&["verify", "--grid", "minimal", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["records"].as_array().unwrap().is_empty());
}

#[test]
fn config_is_layered_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("params.toml");
    std::fs::write(&config, "Omega_sigma = 0.5\nD_sigma = 3.0\nA = 0.02\n").unwrap();
    let c = config.to_str().unwrap();
    let from_file = point_values(&gwharvest(&["point", "--config", c]));
    assert_eq!(from_file["Omega_sigma"], "0.5");
    assert_eq!(from_file["D_sigma"], "3");
    let overridden = point_values(&gwharvest(&["point", "--config", c, "--D_sigma", "1.5"]));
    assert_eq!(overridden["D_sigma"], "1.5");
    assert_eq!(overridden["A"], "0.02");

    std::fs::write(&config, "Omega = 1\n").unwrap();
    assert_eq!(gwharvest(&["point", "--config", c]).status.code(), Some(2));
}

#[test]
fn defaults_are_minkowski() {
    let v = point_values(&gwharvest(&["point"]));
    assert_eq!(v["A"], "0");
    assert_eq!(v["lambda"], "1");
}
