//! Accuracy as a function of generation length.

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::harness::{GenerationRecord, RecordStatus};

pub const DEFAULT_BUCKETS: usize = 10;
pub const DEFAULT_MIN_PER_BUCKET: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthSample {
    pub length: f64,
    pub correct: bool,
}

impl LengthSample {
    /// Transport failures carry no generation and are skipped; extraction
    /// failures count as incorrect.
    pub fn from_record(r: &GenerationRecord) -> Option<Self> {
        (r.status != RecordStatus::TransportError).then_some(LengthSample { length: r.token_length as f64, correct: r.correct })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub length_lo: f64,
    pub length_hi: f64,
    pub mean_accuracy: f64,
    pub sample_count: usize,
}

impl Bucket {
    pub fn midpoint(&self) -> f64 {
        (self.length_lo + self.length_hi) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCurve {
    pub buckets: Vec<Bucket>,
    pub critical_length: f64,
    pub peak_accuracy: f64,
    /// `(min_length, critical_length)`: maps the shortest generation to 0 and L* to 1.
    pub normalization: (f64, f64),
    /// Half the length span of the contiguous buckets around the peak whose
    /// accuracy is within one binomial standard error of it.
    pub plateau_half_width: f64,
}

impl AccuracyCurve {
    /// Length on the `[0, 1]`-at-L* scale; `None` when L* is the minimum length.
    pub fn normalize(&self, length: f64) -> Option<f64> {
        let (lo, star) = self.normalization;
        (star > lo).then(|| (length - lo) / (star - lo))
    }

    pub fn peak_index(&self) -> usize {
        self.buckets
            .iter()
            .position(|b| b.midpoint() == self.critical_length)
            .expect("critical length is a bucket midpoint")
    }
}

/// Equal-width buckets over `[min L, max L]`; runs of buckets holding fewer
/// than `min_per_bucket` samples merge rightward (a short tail merges left).
pub fn build_curve(
    samples: &[LengthSample],
    bucket_count: usize,
    min_per_bucket: usize,
) -> Result<AccuracyCurve, AnalysisError> {
    if bucket_count == 0 || min_per_bucket == 0 {
        return Err(AnalysisError::Degenerate("bucket_count and min_per_bucket must be positive".into()));
    }
    let need = bucket_count * min_per_bucket;
    if samples.len() < need {
        return Err(AnalysisError::Insufficient(format!(
            "{} samples, need at least {need} ({bucket_count} buckets x {min_per_bucket}); short by {}",
            samples.len(),
            need - samples.len()
        )));
    }
    if samples.iter().any(|s| !s.length.is_finite()) {
        return Err(AnalysisError::Degenerate("non-finite generation length".into()));
    }
    let lo = samples.iter().map(|s| s.length).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.length).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bucket_count as f64;
    let mut counts = vec![(0usize, 0usize); bucket_count];
    for s in samples {
        let i = if width > 0.0 { (((s.length - lo) / width) as usize).min(bucket_count - 1) } else { 0 };
        counts[i].0 += 1;
        counts[i].1 += s.correct as usize;
    }
    let edge = |i: usize| if i == bucket_count { hi } else { lo + width * i as f64 };

    // (first raw bucket, one past last raw bucket, n, correct)
    let mut groups: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut open: Option<(usize, usize, usize, usize)> = None;
    for (i, &(n, c)) in counts.iter().enumerate() {
        let g = open.get_or_insert((i, i, 0, 0));
        g.1 = i + 1;
        g.2 += n;
        g.3 += c;
        if g.2 >= min_per_bucket {
            groups.push(open.take().expect("group is open"));
        }
    }
    if let Some(tail) = open {
        let last = groups.last_mut().expect("enough samples for at least one full bucket");
        last.1 = tail.1;
        last.2 += tail.2;
        last.3 += tail.3;
    }
    let buckets: Vec<Bucket> = groups
        .iter()
        .map(|&(a, b, n, c)| Bucket {
            length_lo: edge(a),
            length_hi: edge(b),
            mean_accuracy: c as f64 / n as f64,
            sample_count: n,
        })
        .collect();

    let mut best = 0;
    for (i, b) in buckets.iter().enumerate() {
        if b.mean_accuracy > buckets[best].mean_accuracy {
            best = i;
        }
    }
    let peak = &buckets[best];
    let se = (peak.mean_accuracy * (1.0 - peak.mean_accuracy) / peak.sample_count as f64).sqrt();
    let within = |b: &Bucket| peak.mean_accuracy - b.mean_accuracy <= se;
    let mut left = best;
    while left > 0 && within(&buckets[left - 1]) {
        left -= 1;
    }
    let mut right = best;
    while right + 1 < buckets.len() && within(&buckets[right + 1]) {
        right += 1;
    }
    let critical_length = peak.midpoint();
    Ok(AccuracyCurve {
        critical_length,
        peak_accuracy: peak.mean_accuracy,
        normalization: (lo, critical_length),
        plateau_half_width: (buckets[right].length_hi - buckets[left].length_lo) / 2.0,
        buckets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `per` samples in each unit-width bucket `[i, i+1)` with the given accuracies.
    fn staged(accs: &[f64], per: usize) -> Vec<LengthSample> {
        let mut out = Vec::new();
        for (i, &a) in accs.iter().enumerate() {
            let hits = (a * per as f64).round() as usize;
            for j in 0..per {
                let length = i as f64 * 10.0 + 10.0 * (j as f64 + 0.5) / per as f64;
                out.push(LengthSample { length, correct: j < hits });
            }
        }
        out
    }

    #[test]
    fn argmax_bucket_midpoint() {
        let s = staged(&[0.2, 0.5, 0.9, 0.6], 50);
        let c = build_curve(&s, 4, 20).unwrap();
        assert_eq!(c.buckets.len(), 4);
        let b3 = &c.buckets[2];
        assert_eq!(c.critical_length, b3.midpoint());
        assert!((c.peak_accuracy - 0.9).abs() < 1e-12);
        assert_eq!(c.peak_index(), 2);
    }

    #[test]
    fn ties_go_to_the_shorter_length() {
        let s = staged(&[0.9, 0.9, 0.1], 40);
        let c = build_curve(&s, 3, 20).unwrap();
        assert_eq!(c.critical_length, c.buckets[0].midpoint());
    }

    #[test]
    fn sparse_buckets_merge() {
        let mut s = staged(&[0.5, 0.5], 60);
        // a lone far outlier leaves most of the range empty
        s.push(LengthSample { length: 1000.0, correct: true });
        let c = build_curve(&s, 5, 20).unwrap();
        assert!(c.buckets.iter().all(|b| b.sample_count >= 20));
        assert_eq!(c.buckets.iter().map(|b| b.sample_count).sum::<usize>(), 121);
        assert_eq!(c.buckets.first().unwrap().length_lo, s.iter().map(|x| x.length).fold(f64::INFINITY, f64::min));
        assert_eq!(c.buckets.last().unwrap().length_hi, 1000.0);
        for w in c.buckets.windows(2) {
            assert_eq!(w[0].length_hi, w[1].length_lo);
        }
    }

    #[test]
    fn too_few_samples() {
        let s = staged(&[0.5], 10);
        let err = build_curve(&s, 10, 20).unwrap_err();
        assert!(matches!(err, AnalysisError::Insufficient(m) if m.contains("short by 190")));
    }

    #[test]
    fn normalization_maps_min_and_peak() {
        let c = build_curve(&staged(&[0.2, 0.9, 0.3], 30), 3, 20).unwrap();
        let (lo, star) = c.normalization;
        assert_eq!(c.normalize(lo), Some(0.0));
        assert_eq!(c.normalize(star), Some(1.0));
    }

    proptest! {
        #[test]
        fn lstar_ignores_record_order(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut s = staged(&[0.3, 0.8, 0.5, 0.4, 0.2], 25);
            let base = build_curve(&s, 5, 20).unwrap();
            s.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled = build_curve(&s, 5, 20).unwrap();
            prop_assert_eq!(base.critical_length, shuffled.critical_length);
            prop_assert_eq!(base.buckets, shuffled.buckets);
        }
    }
}
