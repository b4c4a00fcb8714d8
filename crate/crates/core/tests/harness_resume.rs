//! Durable output: interrupted runs resume to exactly M records per cell.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use critlen::harness::{read_dataset, run_experiment, ExperimentConfig, HarnessError};
use serde_json::json;

const M: u32 = 30;

fn config(path: &Path, seed: u64) -> ExperimentConfig {
    ExperimentConfig::from_value(json!({
        "version": 1,
        "tasks": [{"kind": "navigate", "k_params": [{"k_d": 1, "k_s": 3}, {"k_d": 2, "k_s": 2}], "n": [3, 6]},
                  {"kind": "multi_step_arithmetic", "k_params": [{"range": 4, "operators": 2}], "n": [2]}],
        "model_id": "mock",
        "samples_per_cell": M,
        "seed": seed,
        "output_path": path,
        "parallelism": 3,
        "reasoner": {"type": "mock", "noise": {"per_step_error": 0.05, "guess_baseline": 0.5},
                     "peak_length_coeffs": [60, 10], "window_width": 10, "derail_past_peak": 0.01, "length_spread": 0.5}
    }))
    .unwrap()
}

fn run(cfg: &ExperimentConfig, resume: bool) -> Result<critlen::harness::RunSummary, HarnessError> {
    let reasoner = cfg.build_reasoner().unwrap();
    run_experiment(cfg, reasoner.as_ref(), resume)
}

/// Cell counts, with a failure on any duplicated (cell, iteration).
fn census(path: &Path) -> BTreeMap<String, u32> {
    let (_, records) = read_dataset(path).unwrap();
    let mut seen = HashSet::new();
    let mut counts = BTreeMap::new();
    for r in records {
        let cell = format!("{}/{}/{}", r.instance.kind, r.instance.k_params, r.instance.n);
        assert!(seen.insert((cell.clone(), r.iteration)), "duplicate {cell} #{}", r.iteration);
        *counts.entry(cell).or_insert(0) += 1;
    }
    counts
}

#[test]
fn resume_after_truncation_at_any_offset_completes_every_cell_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let full_path = dir.path().join("full.jsonl");
    let cfg = config(&full_path, 3);
    run(&cfg, false).unwrap();
    let full = fs::read(&full_path).unwrap();
    let reference = census(&full_path);
    assert_eq!(reference.len(), 5);
    assert!(reference.values().all(|&c| c == M));

    let header_end = full.iter().position(|&b| b == b'\n').unwrap() + 1;
    let offsets = [header_end, header_end + 1, full.len() / 3, full.len() / 2 + 7, full.len() - 1, full.len()];
    for (i, &cut) in offsets.iter().enumerate() {
        let path = dir.path().join(format!("cut{i}.jsonl"));
        fs::write(&path, &full[..cut]).unwrap();
        let cfg = config(&path, 3);
        let summary = run(&cfg, true).unwrap();
        assert_eq!(census(&path), reference, "cut at byte {cut}");
        assert_eq!(summary.records_total, 5 * M as u64);
        assert_eq!(summary.cells_completed, 5);
        // the same seed derivation reproduces the same records
        let (_, a) = read_dataset(&path).unwrap();
        let (_, b) = read_dataset(&full_path).unwrap();
        let key = |r: &critlen::harness::GenerationRecord| {
            (r.instance.kind, r.instance.k_params.to_string(), r.instance.n, r.iteration, r.completion_text.clone(), r.correct)
        };
        let mut a: Vec<_> = a.iter().map(key).collect();
        let mut b: Vec<_> = b.iter().map(key).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b, "cut at byte {cut}");
    }
}

#[test]
fn resuming_a_complete_run_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    let cfg = config(&path, 4);
    run(&cfg, false).unwrap();
    let before = fs::read(&path).unwrap();
    let summary = run(&cfg, true).unwrap();
    assert_eq!(summary.records_written, 0);
    assert_eq!(fs::read(&path).unwrap(), before);
}

#[test]
fn resume_refuses_a_different_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    run(&config(&path, 5), false).unwrap();
    let err = run(&config(&path, 6), true).unwrap_err();
    assert_eq!(err.code(), "CONFIG_HASH_MISMATCH");
}

#[test]
fn resume_without_a_file_starts_fresh() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent.jsonl");
    let summary = run(&config(&path, 7), true).unwrap();
    assert_eq!(summary.records_written, 5 * M as u64);
}

#[test]
fn worker_count_does_not_change_the_records() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.jsonl");
    let many = dir.path().join("many.jsonl");
    let mut cfg = config(&one, 8);
    cfg.parallelism = 1;
    run(&cfg, false).unwrap();
    let mut cfg = config(&many, 8);
    cfg.parallelism = 6;
    run(&cfg, false).unwrap();
    let strip = |p: &Path| {
        let (h, rs) = read_dataset(p).unwrap();
        let mut v: Vec<_> = rs.into_iter().map(|r| (r.instance.seed, r.iteration, r.completion_text, r.token_length)).collect();
        v.sort();
        (h.config_hash, v)
    };
    assert_eq!(strip(&one), strip(&many));
}
