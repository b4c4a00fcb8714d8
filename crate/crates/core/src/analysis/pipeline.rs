//! Record sets in, per-(model, task) curves, fits and report files out.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    build_curve, correlate_complexity, evaluate_filtering, fit_decay, fit_lstar_model, predict_lstar, AccuracyCurve,
    Correlations, DecayFit, FilterReport, LengthSample, LstarPoint, Prediction, RegressionFile, RegressionFit,
    DEFAULT_BUCKETS, DEFAULT_MIN_PER_BUCKET,
};
use crate::harness::{gate, GenerationRecord, RecordStatus};
use crate::taskgen::{random_guess_accuracy, TaskKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairKey {
    pub model_id: String,
    pub kind: TaskKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub bucket_count: usize,
    pub min_per_bucket: usize,
    /// Also fit one regression per model across all of its included tasks.
    pub pooled: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { bucket_count: DEFAULT_BUCKETS, min_per_bucket: DEFAULT_MIN_PER_BUCKET, pooled: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCurve {
    pub k_params: Value,
    pub scalar_k: u64,
    pub n: u32,
    pub records: usize,
    pub accuracy: f64,
    pub chance: f64,
    pub curve: Result<AccuracyCurve, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairAnalysis {
    pub key: PairKey,
    pub records: usize,
    pub accuracy: f64,
    pub chance: f64,
    /// Pairs failing the inclusion gate get no curves or fits.
    pub included: bool,
    pub cells: Vec<CellCurve>,
    pub correlations: Option<Result<Correlations, String>>,
    pub decay: Option<Result<DecayFit, String>>,
    pub regression: Option<Result<super::CriticalLengthModel, String>>,
}

impl PairAnalysis {
    pub fn lstar_points(&self) -> Vec<LstarPoint> {
        self.cells
            .iter()
            .filter_map(|c| {
                let curve = c.curve.as_ref().ok()?;
                Some(LstarPoint {
                    scalar_k: c.scalar_k as f64,
                    n: c.n as f64,
                    l_star: curve.critical_length,
                    plateau_half_width: Some(curve.plateau_half_width),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisOutput {
    pub options: AnalysisOptions,
    pub pairs: Vec<PairAnalysis>,
    pub regression: RegressionFile,
}

type CellKey = (u64, u32, String);

fn cell_key(r: &GenerationRecord) -> CellKey {
    (r.instance.scalar_k, r.instance.n, r.instance.k_params.to_string())
}

fn group(records: &[GenerationRecord]) -> BTreeMap<PairKey, BTreeMap<CellKey, Vec<&GenerationRecord>>> {
    let mut out: BTreeMap<PairKey, BTreeMap<CellKey, Vec<&GenerationRecord>>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status != RecordStatus::TransportError) {
        let key = PairKey { model_id: r.model_id.clone(), kind: r.instance.kind };
        out.entry(key).or_default().entry(cell_key(r)).or_default().push(r);
    }
    out
}

fn chance_of(r: &GenerationRecord) -> f64 {
    r.instance.complexity().map(|s| random_guess_accuracy(&s)).unwrap_or(0.5)
}

fn accuracy(rs: &[&GenerationRecord]) -> f64 {
    rs.iter().filter(|r| r.correct).count() as f64 / rs.len().max(1) as f64
}

pub fn analyze_records(records: &[GenerationRecord], options: AnalysisOptions) -> AnalysisOutput {
    let mut pairs = Vec::new();
    let mut fits = Vec::new();
    let mut pooled: BTreeMap<String, Vec<LstarPoint>> = BTreeMap::new();
    for (key, cells) in group(records) {
        let all: Vec<&GenerationRecord> = cells.values().flatten().copied().collect();
        let chance = all.iter().map(|r| chance_of(r)).sum::<f64>() / all.len() as f64;
        let acc = accuracy(&all);
        let included = gate(acc, all.len() as u64, chance);
        let mut pair = PairAnalysis {
            key: key.clone(),
            records: all.len(),
            accuracy: acc,
            chance,
            included,
            cells: Vec::new(),
            correlations: None,
            decay: None,
            regression: None,
        };
        if !included {
            log::info!("{} / {}: accuracy {acc:.3} does not clear chance {chance:.3}; excluded", key.model_id, key.kind);
            pairs.push(pair);
            continue;
        }
        for ((scalar_k, n, _), rs) in &cells {
            let samples: Vec<LengthSample> = rs.iter().filter_map(|r| LengthSample::from_record(r)).collect();
            pair.cells.push(CellCurve {
                k_params: rs[0].instance.k_params.clone(),
                scalar_k: *scalar_k,
                n: *n,
                records: rs.len(),
                accuracy: accuracy(rs),
                chance: chance_of(rs[0]),
                curve: build_curve(&samples, options.bucket_count, options.min_per_bucket).map_err(|e| e.to_string()),
            });
        }
        let points = pair.lstar_points();
        pair.correlations = Some(correlate_complexity(&points).map_err(|e| e.to_string()));
        let decay_points: Vec<(u32, f64)> = pair.cells.iter().map(|c| (c.n, c.accuracy)).collect();
        pair.decay = Some(fit_decay(&decay_points, chance).map_err(|e| e.to_string()));
        let model = fit_lstar_model(&points);
        if let Ok(m) = &model {
            fits.push(RegressionFit { model_id: key.model_id.clone(), kind: Some(key.kind), model: m.clone() });
        }
        pair.regression = Some(model.map_err(|e| e.to_string()));
        pooled.entry(key.model_id.clone()).or_default().extend(points);
        pairs.push(pair);
    }
    if options.pooled {
        for (model_id, points) in pooled {
            match fit_lstar_model(&points) {
                Ok(model) => fits.push(RegressionFit { model_id, kind: None, model }),
                Err(e) => log::warn!("pooled regression for {model_id}: {e}"),
            }
        }
    }
    AnalysisOutput { options, pairs, regression: RegressionFile { fits } }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFilter {
    pub key: PairKey,
    pub k_params: Value,
    pub scalar_k: u64,
    pub n: u32,
    pub prediction: Prediction,
    pub report: FilterReport,
}

/// Filters every cell with the window predicted by the matching fit; cells
/// without a matching fit are skipped with a warning.
pub fn filter_records(records: &[GenerationRecord], regression: &RegressionFile) -> Vec<CellFilter> {
    let mut out = Vec::new();
    for (key, cells) in group(records) {
        let Some(fit) = regression.select(Some(&key.model_id), Some(key.kind)).or_else(|| regression.select(None, Some(key.kind)))
        else {
            log::warn!("no regression fit for {} / {}; skipping", key.model_id, key.kind);
            continue;
        };
        for ((scalar_k, n, _), rs) in cells {
            let samples: Vec<LengthSample> = rs.iter().filter_map(|r| LengthSample::from_record(r)).collect();
            let prediction = predict_lstar(&fit.model, scalar_k, n);
            match evaluate_filtering(&samples, (prediction.lo, prediction.hi)) {
                Ok(report) => out.push(CellFilter {
                    key: key.clone(),
                    k_params: rs[0].instance.k_params.clone(),
                    scalar_k,
                    n,
                    prediction,
                    report,
                }),
                Err(e) => log::warn!("{} / {} k={scalar_k} n={n}: {e}", key.model_id, key.kind),
            }
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn outcome<T: Serialize>(r: &Option<Result<T, String>>) -> Value {
    match r {
        None => Value::Null,
        Some(Ok(v)) => serde_json::to_value(v).unwrap_or(Value::Null),
        Some(Err(e)) => serde_json::json!({ "error": e }),
    }
}

fn safe_name(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect()
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

impl AnalysisOutput {
    /// Writes curves.csv, lstar.csv, correlations.json, regression.json and
    /// plotdata/*.csv under `dir`; identical inputs give identical bytes.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir.join("plotdata"))?;
        let mut curves = csv::Writer::from_path(dir.join("curves.csv")).map_err(csv_err)?;
        curves
            .write_record(["model_id", "kind", "k_params", "scalar_k", "n", "bucket", "length_lo", "length_hi", "mean_accuracy", "sample_count"])
            .map_err(csv_err)?;
        let mut lstar = csv::Writer::from_path(dir.join("lstar.csv")).map_err(csv_err)?;
        lstar
            .write_record(["model_id", "kind", "k_params", "scalar_k", "n", "l_star", "peak_accuracy", "plateau_half_width", "records", "accuracy", "note"])
            .map_err(csv_err)?;
        for pair in self.pairs.iter().filter(|p| p.included) {
            let (m, kind) = (pair.key.model_id.as_str(), pair.key.kind.as_str());
            let plot_path = dir.join("plotdata").join(format!("{}_{}.csv", safe_name(m), kind));
            let mut plot = csv::Writer::from_path(plot_path).map_err(csv_err)?;
            plot.write_record(["k_params", "scalar_k", "n", "length", "normalized_length", "mean_accuracy", "sample_count"])
                .map_err(csv_err)?;
            for c in &pair.cells {
                let (k, n, kp) = (c.scalar_k.to_string(), c.n.to_string(), c.k_params.to_string());
                match &c.curve {
                    Ok(curve) => {
                        for (i, b) in curve.buckets.iter().enumerate() {
                            curves
                                .write_record([
                                    m, kind, &kp, &k, &n, &i.to_string(), &b.length_lo.to_string(), &b.length_hi.to_string(),
                                    &b.mean_accuracy.to_string(), &b.sample_count.to_string(),
                                ])
                                .map_err(csv_err)?;
                            plot.write_record([
                                &kp, &k, &n, &b.midpoint().to_string(), &opt(curve.normalize(b.midpoint())),
                                &b.mean_accuracy.to_string(), &b.sample_count.to_string(),
                            ])
                            .map_err(csv_err)?;
                        }
                        lstar
                            .write_record([
                                m, kind, &kp, &k, &n, &curve.critical_length.to_string(), &curve.peak_accuracy.to_string(),
                                &curve.plateau_half_width.to_string(), &c.records.to_string(), &c.accuracy.to_string(), "",
                            ])
                            .map_err(csv_err)?;
                    }
                    Err(e) => lstar
                        .write_record([m, kind, &kp, &k, &n, "", "", "", &c.records.to_string(), &c.accuracy.to_string(), e])
                        .map_err(csv_err)?,
                }
            }
            plot.flush()?;
        }
        curves.flush()?;
        lstar.flush()?;

        let correlations: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "model_id": p.key.model_id,
                    "kind": p.key.kind,
                    "records": p.records,
                    "accuracy": p.accuracy,
                    "chance": p.chance,
                    "included": p.included,
                    "correlations": outcome(&p.correlations),
                    "decay": outcome(&p.decay),
                    "regression_error": p.regression.as_ref().and_then(|r| r.as_ref().err()),
                })
            })
            .collect();
        let text = serde_json::to_string_pretty(&serde_json::json!({ "pairs": correlations }))?;
        fs::write(dir.join("correlations.json"), text + "\n")?;
        fs::write(dir.join("regression.json"), serde_json::to_string_pretty(&self.regression)? + "\n")?;
        Ok(())
    }
}

/// Writes filter_report.csv: one row per cell, then one aggregate row per
/// `(model, task)` pair with `n` left blank.
pub fn write_filter_report(path: &Path, cells: &[CellFilter]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record([
        "model_id", "kind", "k_params", "scalar_k", "n", "predicted_l_star", "window_lo", "window_hi", "total", "kept",
        "kept_fraction", "acc_old", "acc_new", "delta", "standard_error", "diagnostic",
    ])
    .map_err(csv_err)?;
    let mut by_pair: BTreeMap<&PairKey, Vec<FilterReport>> = BTreeMap::new();
    for c in cells {
        let r = &c.report;
        w.write_record([
            c.key.model_id.as_str(),
            c.key.kind.as_str(),
            &c.k_params.to_string(),
            &c.scalar_k.to_string(),
            &c.n.to_string(),
            &c.prediction.l_star.to_string(),
            &c.prediction.lo.to_string(),
            &c.prediction.hi.to_string(),
            &r.total.to_string(),
            &r.kept.to_string(),
            &r.kept_fraction.to_string(),
            &r.acc_old.to_string(),
            &opt(r.acc_new),
            &opt(r.delta),
            &opt(r.standard_error),
            r.diagnostic.as_deref().unwrap_or(""),
        ])
        .map_err(csv_err)?;
        by_pair.entry(&c.key).or_default().push(r.clone());
    }
    for (key, reports) in by_pair {
        if let Some(s) = super::aggregate_filtering(&reports) {
            let total: usize = reports.iter().map(|r| r.total).sum();
            let kept: usize = reports.iter().map(|r| r.kept).sum();
            w.write_record([
                key.model_id.as_str(),
                key.kind.as_str(),
                "mean",
                "",
                "",
                "",
                "",
                "",
                &total.to_string(),
                &kept.to_string(),
                &(kept as f64 / total as f64).to_string(),
                &s.mean_acc_old.to_string(),
                &s.mean_acc_new.to_string(),
                &s.mean_delta.to_string(),
                &s.standard_error.to_string(),
                &format!("{} cells, {} without in-window records", s.cells, s.skipped),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()
}
