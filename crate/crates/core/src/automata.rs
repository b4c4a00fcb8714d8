//! Deterministic finite automata, runs, and the probabilistic-semiautomaton
//! noise model used by the mock reasoner and the decay analysis.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("state {state} out of range (state count {state_count})")]
    StateOutOfRange { state: usize, state_count: usize },
    #[error("symbol {symbol} out of range (alphabet size {alphabet_size})")]
    SymbolOutOfRange { symbol: usize, alphabet_size: usize },
    #[error("transition table is not total: {0}")]
    NotTotal(String),
    #[error("a DFA needs at least one state")]
    Empty,
}

/// An explicit automaton with dense integer states and symbols.
///
/// `delta[state][symbol]` is the successor state. Symbol labels are kept for
/// display only; every operation works on indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DfaRepr", into = "DfaRepr")]
pub struct Dfa {
    state_count: usize,
    alphabet: Vec<String>,
    delta: Vec<Vec<usize>>,
    start: usize,
    accepting: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct DfaRepr {
    k: usize,
    alphabet: Vec<String>,
    delta: Vec<Vec<usize>>,
    q0: usize,
    accepting: Vec<usize>,
}

impl TryFrom<DfaRepr> for Dfa {
    type Error = AutomatonError;

    fn try_from(r: DfaRepr) -> Result<Self, Self::Error> {
        Dfa::new(r.k, r.alphabet, r.delta, r.q0, r.accepting)
    }
}

impl From<Dfa> for DfaRepr {
    fn from(d: Dfa) -> Self {
        DfaRepr {
            k: d.state_count,
            alphabet: d.alphabet,
            delta: d.delta,
            q0: d.start,
            accepting: d.accepting.into_iter().collect(),
        }
    }
}

impl Dfa {
    pub fn new(
        state_count: usize,
        alphabet: Vec<String>,
        delta: Vec<Vec<usize>>,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self, AutomatonError> {
        if state_count == 0 {
            return Err(AutomatonError::Empty);
        }
        if delta.len() != state_count {
            return Err(AutomatonError::NotTotal(format!(
                "{} rows for {} states",
                delta.len(),
                state_count
            )));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::NotTotal(format!(
                    "row {q} has {} entries for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= state_count) {
                return Err(AutomatonError::StateOutOfRange { state: bad, state_count });
            }
        }
        let check = |state: usize| {
            if state < state_count {
                Ok(state)
            } else {
                Err(AutomatonError::StateOutOfRange { state, state_count })
            }
        };
        check(start)?;
        let accepting = accepting
            .into_iter()
            .map(check)
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(Dfa { state_count, alphabet, delta, start, accepting })
    }

    /// Two-state parity automaton over {0, 1}; state 0 is "even" and accepting.
    pub fn parity() -> Self {
        Dfa::new(
            2,
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![1, 0]],
            0,
            [0],
        )
        .expect("parity automaton is well formed")
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn symbol_index(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == label)
    }

    pub fn step(&self, state: usize, symbol: usize) -> Result<usize, AutomatonError> {
        if state >= self.state_count {
            return Err(AutomatonError::StateOutOfRange { state, state_count: self.state_count });
        }
        self.check_symbol(symbol)?;
        Ok(self.delta[state][symbol])
    }

    fn check_symbol(&self, symbol: usize) -> Result<(), AutomatonError> {
        if symbol < self.alphabet.len() {
            Ok(())
        } else {
            Err(AutomatonError::SymbolOutOfRange { symbol, alphabet_size: self.alphabet.len() })
        }
    }

    pub fn execute_run(&self, input: &[usize]) -> Result<Run, AutomatonError> {
        self.execute_run_from(self.start, input)
    }

    /// Runs `input` starting from an arbitrary state instead of q0.
    pub fn execute_run_from(&self, start: usize, input: &[usize]) -> Result<Run, AutomatonError> {
        let mut states = Vec::with_capacity(input.len() + 1);
        states.push(start);
        let mut q = start;
        for &x in input {
            q = self.step(q, x)?;
            states.push(q);
        }
        Ok(Run { input: input.to_vec(), states })
    }

    pub fn accepts(&self, input: &[usize]) -> Result<bool, AutomatonError> {
        let run = self.execute_run(input)?;
        Ok(self.accepting.contains(&run.final_state()))
    }

    /// States reachable from q0 under any input, by breadth-first search.
    pub fn reachable_states(&self) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.start]);
        let mut queue = VecDeque::from([self.start]);
        while let Some(q) = queue.pop_front() {
            for &t in &self.delta[q] {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Runs `input` through the probabilistic semiautomaton: each transition
    /// is applied correctly with probability `1 - d`, otherwise the state
    /// jumps to a uniformly random state (possibly the correct one).
    pub fn sample_noisy_final_state<R: Rng + ?Sized>(
        &self,
        input: &[usize],
        noise: &NoiseModel,
        rng: &mut R,
    ) -> Result<usize, AutomatonError> {
        let mut q = self.start;
        for &x in input {
            let next = self.step(q, x)?;
            q = if rng.gen::<f64>() < noise.per_step_error {
                rng.gen_range(0..self.state_count)
            } else {
                next
            };
        }
        Ok(q)
    }
}

/// A run `(q0, ..., qN)` over an input of length N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub input: Vec<usize>,
    pub states: Vec<usize>,
}

impl Run {
    pub fn run_length(&self) -> usize {
        self.input.len()
    }

    pub fn final_state(&self) -> usize {
        *self.states.last().expect("a run always holds q0")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid noise model: {0}")]
pub struct NoiseModelError(String);

/// Per-step error `d`, guessing floor `b`, and tokens per simulated transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseRepr", into = "NoiseRepr")]
pub struct NoiseModel {
    per_step_error: f64,
    guess_baseline: f64,
    verbosity: f64,
}

#[derive(Serialize, Deserialize)]
struct NoiseRepr {
    per_step_error: f64,
    guess_baseline: f64,
    #[serde(default = "default_verbosity")]
    verbosity: f64,
}

fn default_verbosity() -> f64 {
    8.0
}

impl TryFrom<NoiseRepr> for NoiseModel {
    type Error = NoiseModelError;
    fn try_from(r: NoiseRepr) -> Result<Self, Self::Error> {
        NoiseModel::new(r.per_step_error, r.guess_baseline, r.verbosity)
    }
}

impl From<NoiseModel> for NoiseRepr {
    fn from(n: NoiseModel) -> Self {
        NoiseRepr {
            per_step_error: n.per_step_error,
            guess_baseline: n.guess_baseline,
            verbosity: n.verbosity,
        }
    }
}

impl NoiseModel {
    pub fn new(per_step_error: f64, guess_baseline: f64, verbosity: f64) -> Result<Self, NoiseModelError> {
        if !(0.0..=1.0).contains(&per_step_error) {
            return Err(NoiseModelError(format!("per_step_error {per_step_error} not in [0, 1]")));
        }
        if !(0.0..=1.0).contains(&guess_baseline) {
            return Err(NoiseModelError(format!("guess_baseline {guess_baseline} not in [0, 1]")));
        }
        if !(verbosity >= 0.0 && verbosity.is_finite()) {
            return Err(NoiseModelError(format!("verbosity {verbosity} must be finite and >= 0")));
        }
        Ok(NoiseModel { per_step_error, guess_baseline, verbosity })
    }

    pub fn per_step_error(&self) -> f64 {
        self.per_step_error
    }

    pub fn guess_baseline(&self) -> f64 {
        self.guess_baseline
    }

    pub fn verbosity(&self) -> f64 {
        self.verbosity
    }

    /// `b + (1 - b) (1 - d)^n`: survive every step, or fall back to a guess.
    pub fn expected_accuracy(&self, n: u32) -> f64 {
        let b = self.guess_baseline;
        b + (1.0 - b) * (1.0 - self.per_step_error).powi(n as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> Vec<usize> {
        s.bytes().map(|b| (b - b'0') as usize).collect()
    }

    #[test]
    fn parity_steps() {
        let p = Dfa::parity();
        assert_eq!(p.step(0, 1).unwrap(), 1);
        assert_eq!(p.step(0, 0).unwrap(), 0);
        assert_eq!(p.step(1, 1).unwrap(), 0);
    }

    #[test]
    fn step_rejects_out_of_range() {
        let p = Dfa::parity();
        assert!(matches!(p.step(2, 0), Err(AutomatonError::StateOutOfRange { .. })));
        assert!(matches!(p.step(0, 2), Err(AutomatonError::SymbolOutOfRange { .. })));
        assert!(p.execute_run(&[0, 5]).is_err());
    }

    #[test]
    fn parity_runs_and_acceptance() {
        let p = Dfa::parity();
        let run = p.execute_run(&bits("00110")).unwrap();
        assert_eq!(run.final_state(), 0);
        assert_eq!(run.run_length(), 5);
        assert_eq!(run.states, vec![0, 0, 0, 1, 0, 0]);
        assert!(p.accepts(&bits("00110")).unwrap());
        assert!(!p.accepts(&bits("1")).unwrap());
        assert!(p.accepts(&bits("11")).unwrap());
        let empty = p.execute_run(&[]).unwrap();
        assert_eq!(empty.states, vec![0]);
        assert_eq!(empty.run_length(), 0);
    }

    #[test]
    fn construction_validates() {
        assert_eq!(Dfa::new(0, vec![], vec![], 0, []), Err(AutomatonError::Empty));
        assert!(Dfa::new(2, vec!["a".into()], vec![vec![0]], 0, []).is_err());
        assert!(Dfa::new(1, vec!["a".into()], vec![vec![1]], 0, []).is_err());
        assert!(Dfa::new(1, vec!["a".into()], vec![vec![0]], 1, []).is_err());
        assert!(Dfa::new(1, vec!["a".into()], vec![vec![0]], 0, [3]).is_err());
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(Dfa::parity()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"k": 2, "alphabet": ["0", "1"], "delta": [[0, 1], [1, 0]], "q0": 0, "accepting": [0]})
        );
        let back: Dfa = serde_json::from_value(v).unwrap();
        assert_eq!(back, Dfa::parity());
        let bad = serde_json::json!({"k": 1, "alphabet": ["a"], "delta": [[4]], "q0": 0, "accepting": []});
        assert!(serde_json::from_value::<Dfa>(bad).is_err());
    }

    #[test]
    fn expected_accuracy_examples() {
        let clean = NoiseModel::new(0.0, 0.3, 1.0).unwrap();
        assert_eq!(clean.expected_accuracy(17), 1.0);
        let m = NoiseModel::new(0.1, 0.0, 1.0).unwrap();
        assert!((m.expected_accuracy(1) - 0.9).abs() < 1e-12);
        // Enumerate derail/guess outcomes for two steps: survive both (0.81)
        // or derail at least once and guess right half the time.
        let m = NoiseModel::new(0.1, 0.5, 1.0).unwrap();
        let mut p = 0.0_f64;
        for s1 in [true, false] {
            for s2 in [true, false] {
                let w = if s1 { 0.9 } else { 0.1 } * if s2 { 0.9 } else { 0.1 };
                p += if s1 && s2 { w } else { w * 0.5 };
            }
        }
        assert!((p - 0.905).abs() < 1e-12);
        assert!((m.expected_accuracy(2) - p).abs() < 1e-12);
        let all = NoiseModel::new(1.0, 0.25, 1.0).unwrap();
        assert_eq!(all.expected_accuracy(3), 0.25);
    }

    #[test]
    fn noise_model_rejects_bad_parameters() {
        assert!(NoiseModel::new(-0.1, 0.0, 1.0).is_err());
        assert!(NoiseModel::new(0.1, 1.5, 1.0).is_err());
        assert!(NoiseModel::new(0.1, 0.5, -1.0).is_err());
    }

    fn cycle5() -> Dfa {
        // symbol 0: +1 mod 5, symbol 1: *2 mod 5
        let delta = (0..5).map(|q| vec![(q + 1) % 5, (q * 2) % 5]).collect();
        Dfa::new(5, vec!["inc".into(), "dbl".into()], delta, 0, [0]).unwrap()
    }

    #[test]
    fn noiseless_sampler_matches_run() {
        let dfa = cycle5();
        let input = vec![0, 1, 0, 0, 1, 1, 0];
        let truth = dfa.execute_run(&input).unwrap().final_state();
        let clean = NoiseModel::new(0.0, 0.0, 1.0).unwrap();
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(dfa.sample_noisy_final_state(&input, &clean, &mut rng).unwrap(), truth);
        }
        let single = Dfa::new(1, vec!["a".into()], vec![vec![0]], 0, []).unwrap();
        let always = NoiseModel::new(1.0, 0.0, 1.0).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(single.sample_noisy_final_state(&[0, 0, 0], &always, &mut rng).unwrap(), 0);
        }
    }

    /// Exact distribution over final states by propagating the Markov chain
    /// induced by the noisy transitions.
    fn markov_final_distribution(dfa: &Dfa, input: &[usize], d: f64) -> Vec<f64> {
        let k = dfa.state_count();
        let mut p = vec![0.0; k];
        p[dfa.start()] = 1.0;
        for &x in input {
            let mut next = vec![d / k as f64; k];
            for (q, &mass) in p.iter().enumerate() {
                next[dfa.step(q, x).unwrap()] += (1.0 - d) * mass;
            }
            p = next;
        }
        p
    }

    #[test]
    fn noisy_sampler_matches_markov_chain() {
        let dfa = cycle5();
        let input = vec![0, 1, 1, 0, 0, 1, 0, 1, 0, 0];
        let truth = dfa.execute_run(&input).unwrap().final_state();
        let exact = markov_final_distribution(&dfa, &input, 0.5)[truth];
        let noise = NoiseModel::new(0.5, 0.0, 1.0).unwrap();
        let hits = (0..10_000u64)
            .filter(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                dfa.sample_noisy_final_state(&input, &noise, &mut rng).unwrap() == truth
            })
            .count();
        let rate = hits as f64 / 10_000.0;
        assert!((rate - exact).abs() <= 0.02, "empirical {rate} vs chain {exact}");
    }

    #[test]
    fn reachability_is_bounded() {
        let dfa = cycle5();
        assert_eq!(dfa.reachable_states().len(), 5);
        let stuck = Dfa::new(3, vec!["a".into()], vec![vec![0], vec![2], vec![1]], 0, []).unwrap();
        assert_eq!(stuck.reachable_states(), BTreeSet::from([0]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_dfa() -> impl Strategy<Value = Dfa> {
            (1usize..6, 1usize..4).prop_flat_map(|(k, s)| {
                (
                    proptest::collection::vec(proptest::collection::vec(0..k, s), k),
                    0..k,
                )
                    .prop_map(move |(delta, q0)| {
                        let alphabet = (0..s).map(|i| i.to_string()).collect();
                        Dfa::new(k, alphabet, delta, q0, [q0]).unwrap()
                    })
            })
        }

        proptest! {
            #[test]
            fn runs_compose(dfa in arb_dfa(), xs in proptest::collection::vec(0usize..16, 0..20), ys in proptest::collection::vec(0usize..16, 0..20)) {
                let s = dfa.alphabet().len();
                let x: Vec<usize> = xs.into_iter().map(|v| v % s).collect();
                let y: Vec<usize> = ys.into_iter().map(|v| v % s).collect();
                let mut xy = x.clone();
                xy.extend(&y);
                let whole = dfa.execute_run(&xy).unwrap();
                let first = dfa.execute_run(&x).unwrap();
                let second = dfa.execute_run_from(first.final_state(), &y).unwrap();
                prop_assert_eq!(whole.final_state(), second.final_state());
                prop_assert_eq!(whole.states.len(), xy.len() + 1);
                prop_assert_eq!(dfa.execute_run(&xy).unwrap(), whole);
                prop_assert!(dfa.reachable_states().len() <= dfa.state_count());
            }

            #[test]
            fn accuracy_monotone(d1 in 0.0f64..=1.0, d2 in 0.0f64..=1.0, b in 0.0f64..=1.0, n in 0u32..60) {
                let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
                let a = NoiseModel::new(lo, b, 1.0).unwrap();
                let c = NoiseModel::new(hi, b, 1.0).unwrap();
                prop_assert!(a.expected_accuracy(n) + 1e-12 >= c.expected_accuracy(n));
                prop_assert!(a.expected_accuracy(n) + 1e-12 >= a.expected_accuracy(n + 1));
            }
        }
    }
}
