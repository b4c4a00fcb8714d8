//! Least-squares fit of accuracy ≈ b + (a − b)(1 − d)^n with b fixed.

use serde::{Deserialize, Serialize};

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub d_hat: f64,
    pub baseline_hat: f64,
    /// Accuracy extrapolated to n = 0.
    pub amplitude_hat: f64,
    pub rmse: f64,
}

/// For fixed `d` the amplitude enters linearly, so it has a closed form.
/// Returns `(sse, amplitude)`.
fn profile(points: &[(f64, f64)], b: f64, d: f64) -> (f64, f64) {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (1.0 - d).powf(n)).collect();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(points).map(|(x, &(_, y))| x * (y - b)).sum();
    let scale = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let sse = xs.iter().zip(points).map(|(x, &(_, y))| (y - b - scale * x).powi(2)).sum();
    (sse, b + scale)
}

pub fn fit_decay(points: &[(u32, f64)], baseline: f64) -> Result<DecayFit, AnalysisError> {
    let mut distinct: Vec<u32> = points.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(AnalysisError::Degenerate(format!(
            "decay fit needs at least 3 distinct run lengths, got {}",
            distinct.len()
        )));
    }
    if !(0.0..=1.0).contains(&baseline) || points.iter().any(|p| !p.1.is_finite()) {
        return Err(AnalysisError::Degenerate("baseline must be a probability and accuracies finite".into()));
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|&(n, y)| (n as f64, y)).collect();
    let sse = |d: f64| profile(&pts, baseline, d).0;

    // coarse scan, then golden-section refinement around the best grid point
    const GRID: usize = 1000;
    let mut best = 0;
    let mut best_sse = f64::INFINITY;
    for i in 0..=GRID {
        let v = sse(i as f64 / GRID as f64);
        if v < best_sse {
            best_sse = v;
            best = i;
        }
    }
    let mut a = best.saturating_sub(1) as f64 / GRID as f64;
    let mut c = (best + 1).min(GRID) as f64 / GRID as f64;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = c - phi * (c - a);
    let mut x2 = a + phi * (c - a);
    let (mut f1, mut f2) = (sse(x1), sse(x2));
    for _ in 0..200 {
        if c - a < 1e-12 {
            break;
        }
        if f1 <= f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - phi * (c - a);
            f1 = sse(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (c - a);
            f2 = sse(x2);
        }
    }
    let mut d = ((a + c) / 2.0).clamp(0.0, 1.0);
    for edge in [0.0, 1.0, best as f64 / GRID as f64] {
        if sse(edge) < sse(d) {
            d = edge;
        }
    }
    let (err, amplitude) = profile(&pts, baseline, d);
    Ok(DecayFit { d_hat: d, baseline_hat: baseline, amplitude_hat: amplitude, rmse: (err / pts.len() as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_perfect_accuracy_has_no_decay() {
        let pts: Vec<(u32, f64)> = (1..=6).map(|n| (n, 1.0)).collect();
        let f = fit_decay(&pts, 0.5).unwrap();
        assert_eq!(f.d_hat, 0.0);
        assert!(f.rmse < 1e-12);
    }

    #[test]
    fn recovers_exact_geometric_points() {
        let pts: Vec<(u32, f64)> = (1..=10).map(|n| (n, 0.9f64.powi(n as i32))).collect();
        let f = fit_decay(&pts, 0.0).unwrap();
        assert!((f.d_hat - 0.1).abs() < 1e-6, "{f:?}");
        assert!(f.rmse < 1e-9);
        assert!((f.amplitude_hat - 1.0).abs() < 1e-6);
    }

    #[test]
    fn needs_three_run_lengths() {
        assert!(fit_decay(&[(2, 0.5), (2, 0.4), (2, 0.3)], 0.1).is_err());
        assert!(fit_decay(&[(1, 0.5), (2, 0.4)], 0.1).is_err());
    }

    proptest! {
        #[test]
        fn noiseless_model_points_are_identified(d in 0.01f64..0.6, a in 0.6f64..1.0, b in 0.0f64..0.5) {
            let pts: Vec<(u32, f64)> = [1u32, 2, 4, 8, 12].iter().map(|&n| (n, b + (a - b) * (1.0 - d).powi(n as i32))).collect();
            let f = fit_decay(&pts, b).unwrap();
            prop_assert!(f.rmse < 1e-8, "{:?}", f);
            prop_assert!((f.d_hat - d).abs() < 1e-5);
        }
    }
}
