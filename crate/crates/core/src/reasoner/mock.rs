//! Offline reasoner whose correctness follows the noisy-automaton model and
//! peaks at a configurable generation length.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{word_count, Completion, CompletionRequest, FinishReason, LengthSource, Reasoner, ReasonerError};
use crate::automata::NoiseModel;
use crate::extraction::canonical_block;
use crate::taskgen::{Answer, TaskInstance, TaskKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockReasonerConfig {
    pub noise: NoiseModel,
    /// Optimal length is `c0 + c1 * N + peak_k_coeff * k`.
    pub peak_length_coeffs: (f64, f64),
    #[serde(default)]
    pub peak_k_coeff: f64,
    /// Half-width of the flat optimum around the peak, in tokens.
    pub window_width: f64,
    /// Per-token chance of derailing once past the window.
    pub derail_past_peak: f64,
    /// Per-token chance of an unfinished chain for each token short of the window.
    #[serde(default)]
    pub underthink_rate: f64,
    /// Target lengths are drawn uniformly from `peak * (1 ± length_spread)`.
    #[serde(default)]
    pub length_spread: f64,
}

impl MockReasonerConfig {
    pub fn new(noise: NoiseModel, c0: f64, c1: f64, window_width: f64, derail_past_peak: f64) -> Self {
        MockReasonerConfig {
            noise,
            peak_length_coeffs: (c0, c1),
            peak_k_coeff: 0.0,
            window_width,
            derail_past_peak,
            underthink_rate: 0.0,
            length_spread: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ReasonerError> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(ReasonerError::Config(format!("{name} = {p} is not a probability")))
            }
        };
        prob("derail_past_peak", self.derail_past_peak)?;
        prob("underthink_rate", self.underthink_rate)?;
        if !(self.window_width > 0.0 && self.window_width.is_finite()) {
            return Err(ReasonerError::Config(format!("window_width {} must be > 0", self.window_width)));
        }
        if !(0.0..1.0).contains(&self.length_spread) {
            return Err(ReasonerError::Config(format!("length_spread {} must be in [0, 1)", self.length_spread)));
        }
        let (c0, c1) = self.peak_length_coeffs;
        if ![c0, c1, self.peak_k_coeff].iter().all(|c| c.is_finite()) {
            return Err(ReasonerError::Config("peak coefficients must be finite".into()));
        }
        Ok(())
    }

    pub fn peak_length(&self, n: u32, scalar_k: u64) -> f64 {
        let (c0, c1) = self.peak_length_coeffs;
        c0 + c1 * n as f64 + self.peak_k_coeff * scalar_k as f64
    }

    /// Multiplier on survival from the target length's distance to the window.
    pub fn length_factor(&self, n: u32, scalar_k: u64, target_length: u64) -> f64 {
        let peak = self.peak_length(n, scalar_k);
        let t = target_length as f64;
        let w = self.window_width;
        if t > peak + w {
            (1.0 - self.derail_past_peak).powf(t - (peak + w))
        } else if t < peak - w {
            (1.0 - self.underthink_rate).powf((peak - w) - t)
        } else {
            1.0
        }
    }

    /// Probability that the chain itself survives: every transition succeeds
    /// and the length does not push it off course.
    pub fn survival_probability(&self, n: u32, scalar_k: u64, target_length: u64) -> f64 {
        (1.0 - self.noise.per_step_error()).powi(n as i32) * self.length_factor(n, scalar_k, target_length)
    }

    /// Closed-form probability that the emitted answer is correct.
    pub fn correct_probability(&self, n: u32, scalar_k: u64, target_length: u64) -> f64 {
        let q = self.survival_probability(n, scalar_k, target_length);
        let b = self.noise.guess_baseline();
        q + (1.0 - q) * b
    }

    pub fn sample_target_length<R: Rng + ?Sized>(&self, n: u32, scalar_k: u64, rng: &mut R) -> u64 {
        let peak = self.peak_length(n, scalar_k);
        let s = self.length_spread;
        let t = if s > 0.0 { rng.gen_range(peak * (1.0 - s)..=peak * (1.0 + s)) } else { peak };
        t.round().max(1.0) as u64
    }
}

fn wrong_answer<R: Rng + ?Sized>(instance: &TaskInstance, rng: &mut R) -> Answer {
    match &instance.ground_truth {
        Answer::Boolean(b) => Answer::Boolean(!b),
        Answer::Integer(v) => match instance.kind() {
            TaskKind::IndexTracking => {
                let len = instance.array_length().expect("index tracking has an array length");
                Answer::Integer((v + rng.gen_range(1..len.max(2))).rem_euclid(len))
            }
            _ => {
                let off = rng.gen_range(1..=10) * if rng.gen_bool(0.5) { 1 } else { -1 };
                Answer::Integer(v.saturating_add(off))
            }
        },
        Answer::Text(t) => {
            let mut others: Vec<&String> = instance
                .state_answers
                .iter()
                .filter_map(|a| match a {
                    Some(Answer::Text(s)) if !s.eq_ignore_ascii_case(t) => Some(s),
                    _ => None,
                })
                .collect();
            others.sort();
            others.dedup();
            Answer::Text(others.choose(rng).map_or_else(|| "none".to_string(), |s| s.to_string()))
        }
    }
}

/// Step-by-step narration of the instance's run, one line per transition,
/// each padded or cut to the configured verbosity.
fn step_lines(instance: &TaskInstance, verbosity: f64) -> Vec<Vec<String>> {
    let per_step = verbosity.round().max(1.0) as usize;
    let run = instance.dfa.execute_run(&instance.input).expect("instances carry valid runs");
    instance
        .input
        .iter()
        .enumerate()
        .map(|(i, &sym)| {
            let mut words: Vec<String> = format!("step {}: read {} -> state {}", i + 1, instance.dfa.alphabet()[sym], run.states[i + 1])
                .split_whitespace()
                .map(str::to_string)
                .collect();
            words.truncate(per_step);
            while words.len() < per_step {
                words.push("ok".to_string());
            }
            words
        })
        .collect()
}

/// Produces a trace of exactly `target_length` words (or just the answer
/// block when the target is shorter than that) whose answer is correct with
/// probability [`MockReasonerConfig::correct_probability`].
pub fn mock_complete<R: Rng + ?Sized>(
    instance: &TaskInstance,
    config: &MockReasonerConfig,
    target_length: u64,
    rng: &mut R,
) -> Completion {
    let n = instance.complexity.n;
    let k = instance.complexity.scalar_k();
    let d = config.noise.per_step_error();
    let derailed = (0..n).any(|_| rng.gen_bool(d));
    let length_ok = rng.gen_bool(config.length_factor(n, k, target_length).clamp(0.0, 1.0));
    let correct = (!derailed && length_ok) || rng.gen_bool(config.noise.guess_baseline());
    let answer = if correct { instance.ground_truth.clone() } else { wrong_answer(instance, rng) };

    let block = canonical_block(instance.kind(), &answer);
    let block_words = word_count(&block);
    let text = if target_length < block_words + 3 {
        block
    } else {
        let need = (target_length - block_words - 2) as usize;
        let lines = step_lines(instance, config.noise.verbosity());
        let mut body: Vec<String> = Vec::with_capacity(need);
        'fill: loop {
            for line in &lines {
                for word in line {
                    if body.len() == need {
                        break 'fill;
                    }
                    body.push(word.clone());
                }
            }
        }
        format!("<think>\n{}\n</think>\n{block}", body.join(" "))
    };
    Completion {
        token_length: word_count(&text),
        text,
        finish_reason: FinishReason::Stop,
        latency_ms: 0,
        length_source: LengthSource::Provider,
    }
}

#[derive(Debug, Clone)]
pub struct MockReasoner {
    pub config: MockReasonerConfig,
}

impl MockReasoner {
    pub fn new(config: MockReasonerConfig) -> Result<Self, ReasonerError> {
        config.validate()?;
        Ok(MockReasoner { config })
    }
}

impl Reasoner for MockReasoner {
    fn complete(&self, instance: &TaskInstance, request: &CompletionRequest, seed: u64) -> Result<Completion, ReasonerError> {
        request.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = self.config.sample_target_length(instance.complexity.n, instance.complexity.scalar_k(), &mut rng);
        let mut c = mock_complete(instance, &self.config, target, &mut rng);
        let cap = request.max_tokens as usize;
        if c.token_length > cap as u64 {
            c.text = c.text.split_whitespace().take(cap).collect::<Vec<_>>().join(" ");
            c.token_length = cap as u64;
            c.finish_reason = FinishReason::Length;
        }
        Ok(c)
    }
}
