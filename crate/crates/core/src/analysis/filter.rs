//! Accuracy before and after keeping only generations inside a length window.

use serde::{Deserialize, Serialize};

use super::{AnalysisError, LengthSample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub window: (f64, f64),
    pub total: usize,
    pub kept: usize,
    pub acc_old: f64,
    /// `None` when no record falls inside the window; `diagnostic` says why.
    pub acc_new: Option<f64>,
    pub delta: Option<f64>,
    pub standard_error: Option<f64>,
    pub kept_fraction: f64,
    pub diagnostic: Option<String>,
}

fn mean_correct(samples: &[&LengthSample]) -> f64 {
    samples.iter().filter(|s| s.correct).count() as f64 / samples.len() as f64
}

pub fn evaluate_filtering(samples: &[LengthSample], window: (f64, f64)) -> Result<FilterReport, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::Insufficient("no records to filter".into()));
    }
    let (lo, hi) = window;
    if lo.partial_cmp(&hi).is_none_or(|o| o.is_gt()) {
        return Err(AnalysisError::Degenerate(format!("window ({lo}, {hi}) is empty or not a number")));
    }
    let all: Vec<&LengthSample> = samples.iter().collect();
    let kept: Vec<&LengthSample> = samples.iter().filter(|s| lo <= s.length && s.length <= hi).collect();
    let acc_old = mean_correct(&all);
    let total = all.len();
    let mut report = FilterReport {
        window,
        total,
        kept: kept.len(),
        acc_old,
        acc_new: None,
        delta: None,
        standard_error: None,
        kept_fraction: kept.len() as f64 / total as f64,
        diagnostic: None,
    };
    if kept.is_empty() {
        let min = samples.iter().map(|s| s.length).fold(f64::INFINITY, f64::min);
        let max = samples.iter().map(|s| s.length).fold(f64::NEG_INFINITY, f64::max);
        report.diagnostic = Some(format!("no record length in [{lo}, {hi}]; observed lengths span [{min}, {max}]"));
        return Ok(report);
    }
    let acc_new = mean_correct(&kept);
    let var = |p: f64, n: usize| p * (1.0 - p) / n as f64;
    report.acc_new = Some(acc_new);
    report.delta = Some(acc_new - acc_old);
    report.standard_error = Some((var(acc_old, total) + var(acc_new, kept.len())).sqrt());
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSummary {
    /// Cells with a defined `acc_new`.
    pub cells: usize,
    pub skipped: usize,
    pub mean_acc_old: f64,
    pub mean_acc_new: f64,
    pub mean_delta: f64,
    /// Of `mean_delta`, treating cells as independent.
    pub standard_error: f64,
}

pub fn aggregate_filtering(reports: &[FilterReport]) -> Option<FilterSummary> {
    let defined: Vec<&FilterReport> = reports.iter().filter(|r| r.acc_new.is_some()).collect();
    if defined.is_empty() {
        return None;
    }
    let c = defined.len() as f64;
    let mean = |f: &dyn Fn(&FilterReport) -> f64| defined.iter().map(|r| f(r)).sum::<f64>() / c;
    Some(FilterSummary {
        cells: defined.len(),
        skipped: reports.len() - defined.len(),
        mean_acc_old: mean(&|r| r.acc_old),
        mean_acc_new: mean(&|r| r.acc_new.unwrap_or_default()),
        mean_delta: mean(&|r| r.delta.unwrap_or_default()),
        standard_error: defined.iter().map(|r| r.standard_error.unwrap_or_default().powi(2)).sum::<f64>().sqrt() / c,
    })
}
