//! Synthesis of DFA-backed reasoning tasks.
//!
//! Every instance carries its rendered prompt, the automaton underlying it,
//! the encoded input sequence, and the ground truth decoded from the run's
//! final state. [`oracle_solve`] recomputes the answer from the prompt text
//! alone and is kept independent of the generators.

mod arithmetic;
mod boolean;
mod deduction;
mod dyck;
mod navigate;
mod oracle;
mod pointer;
mod projection;
mod shuffled;
mod web_of_lies;
mod words;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::automata::{AutomatonError, Dfa};

pub use arithmetic::{ArithGroup, ArithOp};
pub use boolean::{BoolExpr, BoolOp};
pub use deduction::Statement;
pub use navigate::{Direction, Move};
pub use oracle::{oracle_solve, oracle_solve_prompt};

pub const PREAMBLE: &str = "You are a smart and helpful AI assistant. Please help me with the following task.";

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("invalid complexity spec: {0}")]
    InvalidSpec(String),
    #[error("unsatisfiable spec: {0}")]
    Unsatisfiable(String),
    #[error("content does not match spec: {0}")]
    ContentMismatch(String),
    #[error("cannot parse prompt: {0}")]
    Parse(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    IndexTracking,
    EvenOddTracking,
    Navigate,
    NestedBoolean,
    Dyck,
    MultiStepArithmetic,
    ShuffledObjects,
    WebOfLies,
    LogicalDeduction,
}

impl TaskKind {
    pub const ALL: [TaskKind; 9] = [
        TaskKind::IndexTracking,
        TaskKind::EvenOddTracking,
        TaskKind::Navigate,
        TaskKind::NestedBoolean,
        TaskKind::Dyck,
        TaskKind::MultiStepArithmetic,
        TaskKind::ShuffledObjects,
        TaskKind::WebOfLies,
        TaskKind::LogicalDeduction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::IndexTracking => "index_tracking",
            TaskKind::EvenOddTracking => "even_odd_tracking",
            TaskKind::Navigate => "navigate",
            TaskKind::NestedBoolean => "nested_boolean",
            TaskKind::Dyck => "dyck",
            TaskKind::MultiStepArithmetic => "multi_step_arithmetic",
            TaskKind::ShuffledObjects => "shuffled_objects",
            TaskKind::WebOfLies => "web_of_lies",
            TaskKind::LogicalDeduction => "logical_deduction",
        }
    }

    pub fn answer_domain(self) -> AnswerDomain {
        match self {
            TaskKind::IndexTracking | TaskKind::MultiStepArithmetic => AnswerDomain::Integer,
            TaskKind::ShuffledObjects | TaskKind::LogicalDeduction => AnswerDomain::Text,
            _ => AnswerDomain::Boolean,
        }
    }

    /// The label that precedes the value inside the answer block.
    pub fn answer_label(self) -> &'static str {
        match self {
            TaskKind::IndexTracking | TaskKind::EvenOddTracking => "pointer ==",
            TaskKind::Navigate => "returned_to_start ==",
            TaskKind::NestedBoolean => "truth_value ==",
            TaskKind::Dyck => "is_balanced ==",
            TaskKind::MultiStepArithmetic => "answer ==",
            TaskKind::ShuffledObjects | TaskKind::WebOfLies | TaskKind::LogicalDeduction => "Answer:",
        }
    }

    /// The closing instruction and answer block appended to every prompt.
    pub fn answer_template(self) -> String {
        let lead = match self {
            TaskKind::Navigate | TaskKind::Dyck => {
                "Provide your final answer as True or False, following this template: [ANSWER]"
            }
            TaskKind::WebOfLies => "Provide your final answer as Yes or No, following this template: [ANSWER]",
            _ => "Provide your final answer following this template: [ANSWER]",
        };
        format!("{lead}\n{} YOUR ANSWER\n[/ANSWER]", self.answer_label())
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        TaskKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| TaskError::InvalidSpec(format!("unknown task kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerDomain {
    Integer,
    Boolean,
    Text,
}

/// Kind-specific components of the state-space size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum KParams {
    /// Array length is `k_s * k_m`; increments are nonzero multiples of `k_m`.
    IndexTracking { k_s: u32, k_m: u32 },
    EvenOddTracking { k_s: u32 },
    Navigate { k_d: u32, k_s: u32 },
    NestedBoolean { operators: u32 },
    Dyck { depth: u32, types: u32 },
    MultiStepArithmetic { range: u32, operators: u32 },
    ShuffledObjects { objects: u32 },
    WebOfLies { people: u32 },
    LogicalDeduction { objects: u32 },
}

impl KParams {
    pub fn kind(&self) -> TaskKind {
        match self {
            KParams::IndexTracking { .. } => TaskKind::IndexTracking,
            KParams::EvenOddTracking { .. } => TaskKind::EvenOddTracking,
            KParams::Navigate { .. } => TaskKind::Navigate,
            KParams::NestedBoolean { .. } => TaskKind::NestedBoolean,
            KParams::Dyck { .. } => TaskKind::Dyck,
            KParams::MultiStepArithmetic { .. } => TaskKind::MultiStepArithmetic,
            KParams::ShuffledObjects { .. } => TaskKind::ShuffledObjects,
            KParams::WebOfLies { .. } => TaskKind::WebOfLies,
            KParams::LogicalDeduction { .. } => TaskKind::LogicalDeduction,
        }
    }

    /// The fields of this variant as a bare JSON object.
    pub fn to_value(&self) -> Value {
        match serde_json::to_value(self).expect("k_params serialize") {
            Value::Object(mut m) => m.remove(self.kind().as_str()).expect("single-key object"),
            other => unreachable!("externally tagged enum serialized as {other}"),
        }
    }

    pub fn from_value(kind: TaskKind, value: &Value) -> Result<Self, TaskError> {
        let tagged = serde_json::json!({ kind.as_str(): value });
        serde_json::from_value(tagged)
            .map_err(|e| TaskError::InvalidSpec(format!("bad k_params for {kind}: {e}")))
    }

    /// Single state-count used by the analysis.
    pub fn scalar_k(&self) -> u64 {
        match *self {
            KParams::IndexTracking { k_s, .. } => k_s as u64,
            KParams::EvenOddTracking { k_s } => k_s as u64,
            KParams::Navigate { k_d, k_s } => (2 * k_s as u64 + 1).saturating_pow(k_d),
            KParams::NestedBoolean { operators } => operators as u64,
            KParams::Dyck { depth, types } => depth as u64 * types as u64,
            KParams::MultiStepArithmetic { range, operators } => (2 * range as u64 + 1) * operators as u64,
            KParams::ShuffledObjects { objects } => objects as u64,
            KParams::WebOfLies { people } => people as u64,
            KParams::LogicalDeduction { objects } => objects as u64,
        }
    }
}

impl fmt::Display for KParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_value())
    }
}

/// A point in a task's complexity grid: kind-specific k components and run length N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexitySpec {
    pub params: KParams,
    pub n: u32,
}

impl ComplexitySpec {
    pub fn new(params: KParams, n: u32) -> Self {
        ComplexitySpec { params, n }
    }

    pub fn kind(&self) -> TaskKind {
        self.params.kind()
    }

    pub fn scalar_k(&self) -> u64 {
        self.params.scalar_k()
    }

    pub fn validate(&self) -> Result<(), TaskError> {
        let n = self.n;
        let bad = |msg: String| Err(TaskError::InvalidSpec(msg));
        if n == 0 {
            return bad("run length n must be >= 1".into());
        }
        match self.params {
            KParams::IndexTracking { k_s, k_m } => {
                if k_s < 2 || k_m < 1 {
                    return bad(format!("index tracking needs k_s >= 2 and k_m >= 1, got ({k_s}, {k_m})"));
                }
                if k_s as u64 * k_m as u64 > pointer::MAX_ARRAY {
                    return bad(format!("array length k_s*k_m exceeds {}", pointer::MAX_ARRAY));
                }
            }
            KParams::EvenOddTracking { k_s } => {
                if !(2..=pointer::MAX_ARRAY as u32).contains(&k_s) {
                    return bad(format!("even/odd tracking needs 2 <= k_s <= {}", pointer::MAX_ARRAY));
                }
            }
            KParams::Navigate { k_d, k_s } => {
                if !(1..=3).contains(&k_d) || k_s < 1 {
                    return bad(format!("navigate needs k_d in 1..=3 and k_s >= 1, got ({k_d}, {k_s})"));
                }
            }
            KParams::NestedBoolean { operators } => {
                if !(2..=4).contains(&operators) {
                    return bad(format!("nested boolean needs 2..=4 operators, got {operators}"));
                }
                if n > boolean::MAX_DEPTH {
                    return bad(format!("nested boolean depth is capped at {}", boolean::MAX_DEPTH));
                }
            }
            KParams::Dyck { depth, types } => {
                if depth < 1 || !(1..=4).contains(&types) || depth * types < 2 {
                    return bad(format!("dyck needs depth >= 1, 1..=4 types, depth*types >= 2; got ({depth}, {types})"));
                }
                if depth > dyck::MAX_DEPTH {
                    return bad(format!("dyck depth is capped at {}", dyck::MAX_DEPTH));
                }
                if n % 2 == 1 {
                    return Err(TaskError::Unsatisfiable(format!(
                        "dyck string length n={n} is odd; a balanced string needs even length"
                    )));
                }
            }
            KParams::MultiStepArithmetic { range, operators } => {
                if range < 1 || !(1..=3).contains(&operators) {
                    return bad(format!("arithmetic needs range >= 1 and 1..=3 operators, got ({range}, {operators})"));
                }
            }
            KParams::ShuffledObjects { objects } => {
                if !(2..=shuffled::MAX_OBJECTS).contains(&objects) {
                    return bad(format!("shuffled objects needs 2..={} objects", shuffled::MAX_OBJECTS));
                }
            }
            KParams::WebOfLies { people } => {
                if !(2..=words::LIAR_NAMES.len() as u32).contains(&people) {
                    return bad(format!("web of lies needs 2..={} people", words::LIAR_NAMES.len()));
                }
                if people != n {
                    return Err(TaskError::Unsatisfiable(format!(
                        "web of lies chains every person, so n ({n}) must equal people ({people})"
                    )));
                }
            }
            KParams::LogicalDeduction { objects } => {
                if !(2..=deduction::MAX_OBJECTS).contains(&objects) {
                    return bad(format!("logical deduction needs 2..={} objects", deduction::MAX_OBJECTS));
                }
                if n > objects {
                    return Err(TaskError::Unsatisfiable(format!(
                        "deduction chain length n={n} exceeds object count {objects}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    kind: TaskKind,
    k_params: Value,
    n: u32,
}

impl Serialize for ComplexitySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpecRepr { kind: self.kind(), k_params: self.params.to_value(), n: self.n }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexitySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SpecRepr::deserialize(d)?;
        let params = KParams::from_value(r.kind, &r.k_params).map_err(serde::de::Error::custom)?;
        Ok(ComplexitySpec { params, n: r.n })
    }
}

impl fmt::Display for ComplexitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} n={}", self.kind(), self.params, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Answer {
    Integer(i64),
    Boolean(bool),
    Text(String),
}

impl Answer {
    pub fn domain(&self) -> AnswerDomain {
        match self {
            Answer::Integer(_) => AnswerDomain::Integer,
            Answer::Boolean(_) => AnswerDomain::Boolean,
            Answer::Text(_) => AnswerDomain::Text,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Integer(v) => write!(f, "{v}"),
            Answer::Boolean(true) => f.write_str("True"),
            Answer::Boolean(false) => f.write_str("False"),
            Answer::Text(t) => f.write_str(t),
        }
    }
}

/// The structured body of an instance, from which the prompt is rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskContent {
    /// Signed pointer increments (index and even/odd tracking).
    PointerWalk { increments: Vec<i64> },
    Navigate { moves: Vec<Move> },
    NestedBoolean { expr: BoolExpr },
    Dyck { text: String },
    Arithmetic { groups: Vec<ArithGroup>, joins: Vec<ArithOp> },
    Shuffled { people: Vec<String>, positions: Vec<String>, swaps: Vec<(usize, usize)>, query: usize },
    /// `claims[i]` is person `i + 1`'s statement about person `i`.
    WebOfLies { people: Vec<String>, first_truthful: bool, claims: Vec<bool> },
    Deduction { objects: Vec<String>, statements: Vec<Statement>, query_rank: u32 },
}

/// The automaton side of an instance: DFA, encoded input, and per-state answers.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Built {
    pub dfa: Dfa,
    pub input: Vec<usize>,
    pub state_answers: Vec<Option<Answer>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstance {
    pub complexity: ComplexitySpec,
    pub content: TaskContent,
    pub prompt: String,
    pub ground_truth: Answer,
    pub dfa: Dfa,
    /// Symbol indices fed to `dfa`; its length is the run length N.
    pub input: Vec<usize>,
    /// Answer encoded by each DFA state; `None` for states with no reading
    /// (absorbing sinks of run-projected automata).
    pub state_answers: Vec<Option<Answer>>,
    pub seed: u64,
    pub answer_template: String,
}

impl TaskInstance {
    pub fn kind(&self) -> TaskKind {
        self.complexity.kind()
    }

    /// Builds an instance from explicit content (e.g. a hand-written worked example).
    pub fn from_content(complexity: ComplexitySpec, content: TaskContent, seed: u64) -> Result<Self, TaskError> {
        let built = build(&complexity, &content)?;
        if built.input.len() != complexity.n as usize {
            return Err(TaskError::ContentMismatch(format!(
                "run has {} transitions but n = {}",
                built.input.len(),
                complexity.n
            )));
        }
        let run = built.dfa.execute_run(&built.input)?;
        let ground_truth = built.state_answers[run.final_state()].clone().ok_or_else(|| {
            TaskError::ContentMismatch("run ended in a state without an answer".into())
        })?;
        let mut instance = TaskInstance {
            complexity,
            content,
            prompt: String::new(),
            ground_truth,
            dfa: built.dfa,
            input: built.input,
            state_answers: built.state_answers,
            seed,
            answer_template: complexity.kind().answer_template(),
        };
        instance.prompt = render_prompt(&instance);
        Ok(instance)
    }

    /// Size of the answer space for IndexTracking (the array length).
    pub fn array_length(&self) -> Option<i64> {
        match self.complexity.params {
            KParams::IndexTracking { k_s, k_m } => Some(k_s as i64 * k_m as i64),
            KParams::EvenOddTracking { k_s } => Some(k_s as i64),
            _ => None,
        }
    }

    pub fn to_line(&self) -> InstanceLine {
        InstanceLine {
            kind: self.kind(),
            k_params: self.complexity.params.to_value(),
            scalar_k: self.complexity.scalar_k(),
            n: self.complexity.n,
            seed: self.seed,
            prompt: self.prompt.clone(),
            answer: self.ground_truth.clone(),
        }
    }
}

/// One JSONL row of `gen` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceLine {
    pub kind: TaskKind,
    pub k_params: Value,
    pub scalar_k: u64,
    pub n: u32,
    pub seed: u64,
    pub prompt: String,
    pub answer: Answer,
}

impl InstanceLine {
    pub fn complexity(&self) -> Result<ComplexitySpec, TaskError> {
        Ok(ComplexitySpec::new(KParams::from_value(self.kind, &self.k_params)?, self.n))
    }

    /// Regenerates the full instance; generation is a pure function of (spec, seed).
    pub fn regenerate(&self) -> Result<TaskInstance, TaskError> {
        generate_instance(&self.complexity()?, self.seed)
    }
}

/// Samples an instance deterministically from `(spec, seed)`.
pub fn generate_instance(spec: &ComplexitySpec, seed: u64) -> Result<TaskInstance, TaskError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n;
    let content = match spec.params {
        KParams::IndexTracking { k_s, k_m } => pointer::sample(k_s, k_m, n, &mut rng),
        KParams::EvenOddTracking { k_s } => pointer::sample(k_s, 1, n, &mut rng),
        KParams::Navigate { k_d, k_s } => navigate::sample(k_d, k_s, n, &mut rng),
        KParams::NestedBoolean { operators } => boolean::sample(operators, n, &mut rng),
        KParams::Dyck { depth, types } => dyck::sample(depth, types, n, &mut rng)?,
        KParams::MultiStepArithmetic { range, operators } => arithmetic::sample(range, operators, n, &mut rng)?,
        KParams::ShuffledObjects { objects } => shuffled::sample(objects, n, &mut rng),
        KParams::WebOfLies { people } => web_of_lies::sample(people, &mut rng),
        KParams::LogicalDeduction { objects } => deduction::sample(objects, n, &mut rng),
    };
    TaskInstance::from_content(*spec, content, seed)
}

fn build(spec: &ComplexitySpec, content: &TaskContent) -> Result<Built, TaskError> {
    let mismatch = || {
        TaskError::ContentMismatch(format!("content variant does not belong to {}", spec.kind()))
    };
    match (&spec.params, content) {
        (KParams::IndexTracking { k_s, k_m }, TaskContent::PointerWalk { increments }) => {
            pointer::build(*k_s as i64 * *k_m as i64, increments, false)
        }
        (KParams::EvenOddTracking { k_s }, TaskContent::PointerWalk { increments }) => {
            pointer::build(*k_s as i64, increments, true)
        }
        (KParams::Navigate { .. }, TaskContent::Navigate { moves }) => navigate::build(moves),
        (KParams::NestedBoolean { .. }, TaskContent::NestedBoolean { expr }) => boolean::build(expr),
        (KParams::Dyck { depth, types }, TaskContent::Dyck { text }) => dyck::build(*depth, *types, text),
        (KParams::MultiStepArithmetic { .. }, TaskContent::Arithmetic { groups, joins }) => {
            arithmetic::build(groups, joins)
        }
        (KParams::ShuffledObjects { .. }, TaskContent::Shuffled { people, positions, swaps, query }) => {
            shuffled::build(people, positions, swaps, *query)
        }
        (KParams::WebOfLies { .. }, TaskContent::WebOfLies { people, first_truthful, claims }) => {
            web_of_lies::build(people, *first_truthful, claims)
        }
        (KParams::LogicalDeduction { .. }, TaskContent::Deduction { objects, statements, query_rank }) => {
            deduction::build(objects, statements, *query_rank)
        }
        _ => Err(mismatch()),
    }
}

/// Renders the full prompt: preamble, kind-specific body, answer template.
pub fn render_prompt(instance: &TaskInstance) -> String {
    let kind = instance.kind();
    let body = match &instance.content {
        TaskContent::PointerWalk { increments } => match instance.complexity.params {
            KParams::EvenOddTracking { k_s } => pointer::render_even_odd(k_s as i64, increments),
            KParams::IndexTracking { k_s, k_m } => pointer::render_index(k_s as i64 * k_m as i64, increments),
            _ => unreachable!("pointer walk content only belongs to pointer tasks"),
        },
        TaskContent::Navigate { moves } => navigate::render(moves),
        TaskContent::NestedBoolean { expr } => boolean::render(expr),
        TaskContent::Dyck { text } => dyck::render(text),
        TaskContent::Arithmetic { groups, joins } => arithmetic::render(groups, joins),
        TaskContent::Shuffled { people, positions, swaps, query } => {
            shuffled::render(people, positions, swaps, *query)
        }
        TaskContent::WebOfLies { people, first_truthful, claims } => {
            web_of_lies::render(people, *first_truthful, claims)
        }
        TaskContent::Deduction { objects, statements, query_rank } => {
            deduction::render(objects, statements, *query_rank)
        }
    };
    // The BBH-derived kinds put the template directly under the question.
    let sep = match kind {
        TaskKind::ShuffledObjects | TaskKind::WebOfLies | TaskKind::LogicalDeduction => "\n",
        _ => "\n\n",
    };
    format!("{PREAMBLE}\n\n{body}{sep}{}", kind.answer_template())
}

/// Chance accuracy of a uniform guess over the kind's candidate answers.
pub fn random_guess_accuracy(spec: &ComplexitySpec) -> f64 {
    match spec.params {
        KParams::IndexTracking { k_s, k_m } => 1.0 / (k_s as f64 * k_m as f64),
        KParams::ShuffledObjects { objects } | KParams::LogicalDeduction { objects } => 1.0 / objects as f64,
        // MultiStepArithmetic has no finite candidate set; a guess over the
        // atom range is the closest analogue.
        KParams::MultiStepArithmetic { range, .. } => 1.0 / (2.0 * range as f64 + 1.0),
        _ => 0.5,
    }
}

/// A modest sweep of valid specs per kind, used by the agreement checks.
pub fn default_grid(kind: TaskKind) -> Vec<ComplexitySpec> {
    let mut out = Vec::new();
    let mut push = |params: KParams, ns: &[u32]| {
        out.extend(ns.iter().map(|&n| ComplexitySpec::new(params, n)));
    };
    match kind {
        TaskKind::IndexTracking => {
            for (k_s, k_m) in [(3, 9), (5, 3), (9, 9), (17, 1)] {
                push(KParams::IndexTracking { k_s, k_m }, &[1, 4, 10, 24]);
            }
        }
        TaskKind::EvenOddTracking => {
            for k_s in [5, 17, 30] {
                push(KParams::EvenOddTracking { k_s }, &[1, 4, 10, 24]);
            }
        }
        TaskKind::Navigate => {
            for (k_d, k_s) in [(1, 10), (2, 100), (3, 5)] {
                push(KParams::Navigate { k_d, k_s }, &[1, 2, 5, 12]);
            }
        }
        TaskKind::NestedBoolean => {
            for operators in [2, 3, 4] {
                push(KParams::NestedBoolean { operators }, &[1, 2, 3, 5]);
            }
        }
        TaskKind::Dyck => {
            for (depth, types) in [(1, 2), (2, 4), (3, 3), (5, 1)] {
                push(KParams::Dyck { depth, types }, &[2, 8, 16, 30]);
            }
        }
        TaskKind::MultiStepArithmetic => {
            for (range, operators) in [(2, 2), (5, 3), (9, 1)] {
                push(KParams::MultiStepArithmetic { range, operators }, &[1, 2, 4]);
            }
        }
        TaskKind::ShuffledObjects => {
            for objects in [3, 5, 7] {
                push(KParams::ShuffledObjects { objects }, &[1, 3, 7, 12]);
            }
        }
        TaskKind::WebOfLies => {
            for people in [2, 3, 5, 8, 12] {
                push(KParams::WebOfLies { people }, &[people]);
            }
        }
        TaskKind::LogicalDeduction => {
            for objects in [3, 5, 7, 9] {
                let mut ns = vec![1, 2, objects / 2 + 1, objects];
                ns.dedup();
                push(KParams::LogicalDeduction { objects }, &ns);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
