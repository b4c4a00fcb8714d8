//! Linear predictor L* ≈ β0 + β_n·n + β_k·k and its tolerance window.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::taskgen::TaskKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LstarPoint {
    pub scalar_k: f64,
    pub n: f64,
    pub l_star: f64,
    /// Plateau half-width of the curve L* came from, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateau_half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalLengthModel {
    pub beta0: f64,
    pub beta_n: f64,
    pub beta_k: f64,
    pub r_squared: f64,
    pub residual_sd: f64,
    /// Always ≥ `residual_sd`.
    pub epsilon: f64,
    /// Standard errors of `(beta0, beta_n, beta_k)`.
    #[serde(default)]
    pub std_errors: [f64; 3],
    #[serde(default)]
    pub count: usize,
}

impl CriticalLengthModel {
    pub fn point(&self, scalar_k: f64, n: f64) -> f64 {
        self.beta0 + self.beta_n * n + self.beta_k * scalar_k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub l_star: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Prediction {
    pub fn contains(&self, length: f64) -> bool {
        self.lo <= length && length <= self.hi
    }
}

/// One fitted model, labelled with the `(model, task)` pair it belongs to;
/// `kind` is absent for a fit pooled over tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub model_id: String,
    pub kind: Option<TaskKind>,
    #[serde(flatten)]
    pub model: CriticalLengthModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFile {
    pub fits: Vec<RegressionFit>,
}

impl RegressionFile {
    /// Accepts either a `{"fits": [...]}` document or a single bare model.
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            File(RegressionFile),
            Model(CriticalLengthModel),
        }
        Ok(match serde_json::from_str(text)? {
            Either::File(f) => f,
            Either::Model(model) => RegressionFile { fits: vec![RegressionFit { model_id: String::new(), kind: None, model }] },
        })
    }

    pub fn load(path: &Path) -> std::io::Result<Result<Self, serde_json::Error>> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    /// Exact `(model, kind)` fit first, then a pooled fit for the model; the
    /// filters are ignored when left unset and only one fit matches.
    pub fn select(&self, model_id: Option<&str>, kind: Option<TaskKind>) -> Option<&RegressionFit> {
        let by_model = |f: &&RegressionFit| model_id.is_none_or(|m| f.model_id == m);
        let candidates: Vec<&RegressionFit> = self.fits.iter().filter(by_model).collect();
        match kind {
            Some(k) => candidates
                .iter()
                .find(|f| f.kind == Some(k))
                .or_else(|| candidates.iter().find(|f| f.kind.is_none()))
                .copied(),
            None if candidates.len() == 1 => Some(candidates[0]),
            None => candidates.iter().find(|f| f.kind.is_none()).copied(),
        }
    }
}

/// Ordinary least squares on `(1, n, k)`, solved on centered features.
pub fn fit_lstar_model(points: &[LstarPoint]) -> Result<CriticalLengthModel, AnalysisError> {
    let m = points.len();
    if m < 4 {
        return Err(AnalysisError::Insufficient(format!("regression needs at least 4 points, got {m}")));
    }
    if points.iter().any(|p| !(p.n.is_finite() && p.scalar_k.is_finite() && p.l_star.is_finite())) {
        return Err(AnalysisError::Degenerate("non-finite regression input".into()));
    }
    let mf = m as f64;
    let mean = |f: fn(&LstarPoint) -> f64| points.iter().map(f).sum::<f64>() / mf;
    let (nbar, kbar, ybar) = (mean(|p| p.n), mean(|p| p.scalar_k), mean(|p| p.l_star));
    let (mut snn, mut skk, mut snk, mut sny, mut sky, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points {
        let (dn, dk, dy) = (p.n - nbar, p.scalar_k - kbar, p.l_star - ybar);
        snn += dn * dn;
        skk += dk * dk;
        snk += dn * dk;
        sny += dn * dy;
        sky += dk * dy;
        syy += dy * dy;
    }
    let det = snn * skk - snk * snk;
    if snn == 0.0 || skk == 0.0 || det <= 1e-10 * snn * skk {
        let what = match (snn == 0.0, skk == 0.0) {
            (true, _) => "the grid has a single n value",
            (_, true) => "the grid has a single k value",
            _ => "n and k are collinear across the grid",
        };
        return Err(AnalysisError::RankDeficient(what.into()));
    }
    let beta_n = (skk * sny - snk * sky) / det;
    let beta_k = (snn * sky - snk * sny) / det;
    let beta0 = ybar - beta_n * nbar - beta_k * kbar;
    let ssr: f64 = points
        .iter()
        .map(|p| (p.l_star - (beta0 + beta_n * p.n + beta_k * p.scalar_k)).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ssr / syy).clamp(0.0, 1.0) } else { 1.0 };
    let sigma2 = ssr / (mf - 3.0);
    let residual_sd = sigma2.sqrt();
    let var_n = sigma2 * skk / det;
    let var_k = sigma2 * snn / det;
    let cov_nk = -sigma2 * snk / det;
    let var_0 = sigma2 / mf + nbar * nbar * var_n + kbar * kbar * var_k + 2.0 * nbar * kbar * cov_nk;
    let widths: Vec<f64> = points.iter().filter_map(|p| p.plateau_half_width).collect();
    let plateau = if widths.is_empty() { 0.0 } else { widths.iter().sum::<f64>() / widths.len() as f64 };
    Ok(CriticalLengthModel {
        beta0,
        beta_n,
        beta_k,
        r_squared,
        residual_sd,
        epsilon: residual_sd.max(plateau),
        std_errors: [var_0.max(0.0).sqrt(), var_n.max(0.0).sqrt(), var_k.max(0.0).sqrt()],
        count: m,
    })
}

pub fn predict_lstar(model: &CriticalLengthModel, scalar_k: u64, n: u32) -> Prediction {
    let l_star = model.point(scalar_k as f64, n as f64);
    Prediction { l_star, lo: (l_star - model.epsilon).max(1.0), hi: (l_star + model.epsilon).max(1.0) }
}
