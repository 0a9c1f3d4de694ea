use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use widomlab::harness::{self, read_json, ExperimentConfig, CSV_HEADER, PRESETS};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_widomlab"))
}

fn widomlab(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn preset_text(name: &str) -> &'static str {
    PRESETS.iter().find(|(n, _)| *n == name).unwrap().1
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SQUARES_COEFFS: &str = r#"
name = "squares_coeffs"
dimension = 2
mode = "coeff_only"
alphas = [1.0]

[lambda]
kind = "box"
lo = [0.0, 0.0]
hi = [1.0, 1.0]

[omega]
kind = "box"
lo = [-0.5, -0.5]
hi = [0.5, 0.5]
"#;

#[test]
fn passing_preset_exits_zero_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = widomlab(&["run", "landau_widom_1d", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["landau_widom_1d.csv", "landau_widom_1d.json", "landau_widom_1d.gp"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let csv = std::fs::read_to_string(out.join("landau_widom_1d.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn zero_tolerance_fails_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = widomlab(&[
        "run",
        "landau_widom_1d",
        "--tolerance",
        "0",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL log_coefficient"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(widomlab(&["run", "landau_widom_1d", "--bogus"]).status.code(), Some(2));
    assert_eq!(widomlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(widomlab(&["run", "/nonexistent/config.toml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.toml", &format!("{SQUARES_COEFFS}\nunknown_key = 3\n"));
    let o = widomlab(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown_key"));
}

#[test]
fn validate_reports_memory_budget_violation() {
    let dir = tempfile::tempdir().unwrap();
    let text = preset_text("squares_2d_p2").replace("mode = ", "memory_budget_mb = 1.0\nmode = ");
    let cfg = write_config(dir.path(), "tight.toml", &text);
    let o = widomlab(&["validate", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("memory_budget"));
    assert_eq!(widomlab(&["validate", "squares_2d_p2"]).status.code(), Some(0));
}

#[test]
fn guard_failure_at_one_alpha_keeps_other_records() {
    let dir = tempfile::tempdir().unwrap();
    // only the largest alpha needs more than 10 MB
    let text = preset_text("squares_2d_p2").replace("mode = ", "memory_budget_mb = 10.0\nmode = ");
    let cfg = write_config(dir.path(), "partial.toml", &text);
    let out = dir.path().join("out");
    let o = widomlab(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let report = read_json(&out.join("squares_2d_p2.json")).unwrap();
    assert_eq!(report.records.len(), 6);
    let failed: Vec<_> = report.records.iter().filter(|r| r.error.is_some()).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].alpha, 48.0);
    assert!(failed[0].is_guard_failure() && failed[0].trace.is_none());
    assert!(report.records[..5].iter().all(|r| r.trace.is_some()));
    assert_eq!(report.curves[0].fit.as_ref().unwrap().n_points, 5);
    let csv = std::fs::read_to_string(out.join("squares_2d_p2.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("48,p=2,,"), "{last}");
}

#[test]
fn coeff_only_csv_is_header_only_and_reports_square_w1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sq.toml", SQUARES_COEFFS);
    let out = dir.path().join("out");
    let o = widomlab(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("squares_coeffs.csv")).unwrap();
    assert_eq!(csv.trim_end(), CSV_HEADER.join(","));
    let report = read_json(&out.join("squares_coeffs.json")).unwrap();
    assert!((report.coefficients.w1_geometric - 4.0 / PI).abs() < 1e-6);
    assert!(report.records.is_empty());

    let o = widomlab(&["coeffs", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("W1(1) = 1.2732395447"));
}

#[test]
fn json_round_trip_and_hash_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::preset("landau_widom_1d").unwrap();
    let report = harness::run(&cfg).unwrap();
    let files = harness::emit(&report, &[harness::Format::Json], dir.path()).unwrap();
    let back = read_json(&files[0]).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.config_hash, cfg.hash());
    assert_eq!(back.config, cfg);
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert!(!text.contains("NaN"));
}

#[test]
fn regularized_difference_vanishes_for_p1() {
    let text = preset_text("complement_box_regularized")
        .replace("p_max = 2", "p_max = 1")
        .replace("[8.0, 12.0, 16.0, 24.0, 32.0]", "[4.0, 5.0, 6.0]");
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    let report = harness::run(&cfg).unwrap();
    assert_eq!(report.records.len(), 3);
    for r in &report.records {
        assert_eq!(r.trace.unwrap().norm(), 0.0, "alpha {}", r.alpha);
    }
    assert!(report.pass);
}

#[test]
fn backends_compare_agrees_in_one_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let text = preset_text("landau_widom_1d")
        .replace("[200.0, 400.0, 800.0, 1600.0]", "[20.0, 30.0, 40.0]")
        .replace("[verdict]", "[torus_resolution]\nppw = 8.0\npad_factor = 4.0\n\n[verdict]");
    let cfg = write_config(dir.path(), "cmp.toml", &text);
    let o = widomlab(&["backends-compare", &cfg]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS max relative difference"));
}

#[test]
fn presets_are_listed() {
    let o = widomlab(&["presets"]);
    let s = String::from_utf8_lossy(&o.stdout);
    for (name, _) in PRESETS {
        assert!(s.contains(name));
    }
}
