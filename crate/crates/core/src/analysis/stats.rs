//! Correlation of the critical length with run length and state count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AnalysisError, LstarPoint};

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::Degenerate(format!("paired series differ in length: {} vs {}", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(AnalysisError::Insufficient(format!("correlation needs at least 2 points, got {}", xs.len())));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        let which = if sxx == 0.0 { "first" } else { "second" };
        return Err(AnalysisError::ZeroVariance(format!("{which} series is constant")));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    /// Pooled over every cell of the grid, on min-max normalized L*.
    pub corr_n: f64,
    pub corr_k: f64,
    pub cells: usize,
    /// Mean within-slice correlation (slices of fixed k for `corr_n`, of fixed
    /// n for `corr_k`), over the slices where it is defined.
    pub sliced_corr_n: Option<f64>,
    pub sliced_corr_k: Option<f64>,
}

/// Normalizes L* to `[0, 1]` across the grid, then correlates with n and
/// with the scalar state count.
pub fn correlate_complexity(points: &[LstarPoint]) -> Result<Correlations, AnalysisError> {
    let lo = points.iter().map(|p| p.l_star).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.l_star).fold(f64::NEG_INFINITY, f64::max);
    if points.len() >= 2 && hi <= lo {
        return Err(AnalysisError::ZeroVariance("critical length is identical in every cell".into()));
    }
    let norm: Vec<f64> = points.iter().map(|p| (p.l_star - lo) / (hi - lo)).collect();
    let ns: Vec<f64> = points.iter().map(|p| p.n).collect();
    let ks: Vec<f64> = points.iter().map(|p| p.scalar_k).collect();
    let corr_n = pearson(&ns, &norm).map_err(|e| relabel(e, "n"))?;
    let corr_k = pearson(&ks, &norm).map_err(|e| relabel(e, "k"))?;
    Ok(Correlations {
        corr_n,
        corr_k,
        cells: points.len(),
        sliced_corr_n: sliced(points, &norm, |p| p.scalar_k, |p| p.n),
        sliced_corr_k: sliced(points, &norm, |p| p.n, |p| p.scalar_k),
    })
}

fn relabel(e: AnalysisError, axis: &str) -> AnalysisError {
    match e {
        AnalysisError::ZeroVariance(_) => AnalysisError::ZeroVariance(format!("the grid has a single {axis} value")),
        other => other,
    }
}

fn sliced(
    points: &[LstarPoint],
    norm: &[f64],
    fixed: impl Fn(&LstarPoint) -> f64,
    varied: impl Fn(&LstarPoint) -> f64,
) -> Option<f64> {
    let mut slices: BTreeMap<u64, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (p, &y) in points.iter().zip(norm) {
        let s = slices.entry(fixed(p).to_bits()).or_default();
        s.0.push(varied(p));
        s.1.push(y);
    }
    let rs: Vec<f64> = slices.values().filter_map(|(x, y)| pearson(x, y).ok()).collect();
    (!rs.is_empty()).then(|| rs.iter().sum::<f64>() / rs.len() as f64)
}
