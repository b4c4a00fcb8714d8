//! The `critlen` binary: exit codes, outputs, and re-runnability.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::json;

fn critlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critlen")).args(args).output().expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_writes_count_lines_and_is_repeatable() {
    let args = ["gen", "--kind", "dyck", "--depth", "2", "--types", "4", "--n", "16", "--count", "10", "--seed", "7"];
    let a = critlen(&args);
    assert!(a.status.success(), "{}", text(&a.stderr));
    let out = text(&a.stdout);
    assert_eq!(out.lines().count(), 10);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kind"], "dyck");
        assert_eq!(v["n"], 16);
    }
    assert_eq!(critlen(&args).stdout, a.stdout);
    let other_seed = critlen(&["gen", "--kind", "dyck", "--depth", "2", "--types", "4", "--n", "16", "--count", "10", "--seed", "8"]);
    assert_ne!(other_seed.stdout, a.stdout);
}

#[test]
fn gen_accepts_k_params_json() {
    let o = critlen(&["gen", "--kind", "index_tracking", "--k-params", r#"{"k_s": 3, "k_m": 4}"#, "--n", "5", "--count", "2"]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(text(&o.stdout).contains("length-12 array"));
}

#[test]
fn predict_prints_the_window() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.json");
    fs::write(&r, r#"{"beta0": 10, "beta_n": 2, "beta_k": 0, "r_squared": 1, "residual_sd": 0, "epsilon": 4}"#).unwrap();
    let o = critlen(&["predict", "--regression", p(&r), "--k", "5", "--n", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    assert_eq!(text(&o.stdout).trim(), "L*=34 window=[30,38]");
}

#[test]
fn malformed_config_is_a_config_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let o = critlen(&["run", "--config", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("error[CONFIG_PARSE]"), "{}", text(&o.stderr));
}

#[test]
fn usage_errors_exit_2() {
    let o = critlen(&["analyze", "--nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o.stderr).contains("Usage"));
    assert_eq!(critlen(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(critlen(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_data_is_an_io_error() {
    let o = critlen(&["analyze", "--data", "/nonexistent/x.jsonl", "--out", "/tmp/never-written"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).starts_with("error[IO]"), "{}", text(&o.stderr));
}

#[test]
fn run_analyze_filter_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.jsonl");
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        json!({
            "version": 1,
            "tasks": [{"kind": "index_tracking",
                       "k_params": [{"k_s": 3, "k_m": 3}, {"k_s": 6, "k_m": 3}],
                       "n": [2, 6, 10]}],
            "model_id": "mock",
            "samples_per_cell": 300,
            "seed": 2,
            "output_path": data,
            "parallelism": 2,
            "reasoner": {"type": "mock", "noise": {"per_step_error": 0.01, "guess_baseline": 0.1, "verbosity": 2},
                         "peak_length_coeffs": [100, 30], "window_width": 15, "derail_past_peak": 0.003,
                         "underthink_rate": 0.003, "length_spread": 0.5}
        })
        .to_string(),
    )
    .unwrap();
    let o = critlen(&["run", "--config", p(&config), "--set", "samples_per_cell=250"]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(text(&o.stdout).contains("records_total=1500"), "{}", text(&o.stdout));

    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let o = critlen(&["analyze", "--data", p(&data), "--out", p(out)]);
        assert!(o.status.success(), "{}", text(&o.stderr));
    }
    for file in ["curves.csv", "lstar.csv", "correlations.json", "regression.json", "plotdata/mock_index_tracking.csv"] {
        let a = fs::read(out_a.join(file)).unwrap_or_else(|_| panic!("{file} missing"));
        assert_eq!(a, fs::read(out_b.join(file)).unwrap(), "{file} differs between runs");
    }
    let lstar = fs::read_to_string(out_a.join("lstar.csv")).unwrap();
    assert_eq!(lstar.lines().count(), 7, "{lstar}");

    let regression = out_a.join("regression.json");
    let o = critlen(&["predict", "--regression", p(&regression), "--k", "4", "--n", "8"]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(text(&o.stdout).starts_with("L*="));

    let f = dir.path().join("f");
    let o = critlen(&["filter", "--data", p(&data), "--regression", p(&regression), "--out", p(&f)]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let report = fs::read_to_string(f.join("filter_report.csv")).unwrap();
    assert_eq!(report.lines().count(), 1 + 6 + 1, "{report}");
    let again = dir.path().join("f2");
    critlen(&["filter", "--data", p(&data), "--regression", p(&regression), "--out", p(&again)]);
    assert_eq!(fs::read(again.join("filter_report.csv")).unwrap(), report.as_bytes());

    let r = dir.path().join("r");
    let o = critlen(&["report", "--data", p(&data), "--out", p(&r)]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let md = fs::read_to_string(r.join("report.md")).unwrap();
    assert!(md.contains("| mock | index_tracking |"), "{md}");
}

#[test]
fn selftest_agreement_sweep() {
    let o = critlen(&["selftest", "--agreement-only", "--instances", "50"]);
    assert!(o.status.success(), "{}", text(&o.stdout));
    assert_eq!(text(&o.stdout).lines().filter(|l| l.contains(" PASS ")).count(), 9);
}
