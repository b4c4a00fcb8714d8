//! Monte Carlo sampling loop over a complexity grid, with durable JSONL
//! output and resume.
//!
//! The output file starts with a header line carrying a hash of the
//! experiment-defining config; every following line is one
//! [`GenerationRecord`]. Lines are appended and flushed one at a time by a
//! single writer, so a crash loses at most a partially written last line.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::extraction::{extract_answer_with, judge_with, ExtractOptions, JudgeOptions};
use crate::reasoner::{
    Completion, CompletionRequest, FinishReason, HttpConfig, HttpReasoner, LengthSource, MockReasoner,
    MockReasonerConfig, Reasoner, ReasonerError,
};
use crate::taskgen::{generate_instance, Answer, ComplexitySpec, KParams, TaskError, TaskKind};

pub const SCHEMA_VERSION: u32 = 1;
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot parse config: {0}")]
    ConfigParse(String),
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: config hash {found} in file does not match {expected}; refusing to resume")]
    HashMismatch { path: PathBuf, expected: String, found: String },
    #[error("{path}:{line}: {message}")]
    Data { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

impl HarnessError {
    /// Stable machine-readable code for the command line.
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::ConfigParse(_) => "CONFIG_PARSE",
            HarnessError::ConfigInvalid(_) => "CONFIG_INVALID",
            HarnessError::Io { .. } => "IO",
            HarnessError::HashMismatch { .. } => "CONFIG_HASH_MISMATCH",
            HarnessError::Data { .. } => "DATA_PARSE",
            HarnessError::Task(_) => "TASK",
            HarnessError::Reasoner(ReasonerError::Credential { .. }) => "CREDENTIAL",
            HarnessError::Reasoner(_) => "REASONER",
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

/// One kind swept over a set of k parameters and run lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskGrid {
    pub kind: TaskKind,
    pub k_params: Vec<Value>,
    pub n: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReasonerConfig {
    Mock(MockReasonerConfig),
    Http(HttpConfig),
}

fn default_samples() -> u32 {
    200
}
fn default_temperature() -> f64 {
    0.9
}
fn default_max_tokens() -> u32 {
    8192
}
fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub tasks: Vec<TaskGrid>,
    pub model_id: String,
    #[serde(default = "default_samples")]
    pub samples_per_cell: u32,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default)]
    pub seed: u64,
    pub output_path: PathBuf,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    pub reasoner: ReasonerConfig,
    #[serde(default)]
    pub extraction: ExtractOptions,
    #[serde(default)]
    pub judging: JudgeOptions,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let v: Value = serde_json::from_str(text).map_err(|e| HarnessError::ConfigParse(e.to_string()))?;
        Self::from_value(v)
    }

    pub fn from_value(v: Value) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_value(v).map_err(|e| HarnessError::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::ConfigInvalid(m));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {} (expected {CONFIG_VERSION})", self.version));
        }
        if self.samples_per_cell == 0 {
            return bad("samples_per_cell must be >= 1".into());
        }
        if self.parallelism == 0 {
            return bad("parallelism must be >= 1".into());
        }
        if self.max_tokens == 0 || self.temperature.is_nan() || self.temperature < 0.0 {
            return bad("max_tokens must be >= 1 and temperature >= 0".into());
        }
        if self.tasks.is_empty() || self.tasks.iter().any(|g| g.k_params.is_empty() || g.n.is_empty()) {
            return bad("every task grid needs at least one k_params entry and one n".into());
        }
        if let ReasonerConfig::Mock(m) = &self.reasoner {
            m.validate().map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
        }
        self.cells().map(|_| ())
    }

    /// All grid cells, in config order.
    pub fn cells(&self) -> Result<Vec<ComplexitySpec>, HarnessError> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for grid in &self.tasks {
            for kp in &grid.k_params {
                let params = KParams::from_value(grid.kind, kp)?;
                for &n in &grid.n {
                    let spec = ComplexitySpec::new(params, n);
                    spec.validate()?;
                    if seen.insert(spec) {
                        out.push(spec);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Hash of everything that determines the records: output location and
    /// worker count are excluded.
    pub fn config_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(m) = &mut v {
            m.remove("output_path");
            m.remove("parallelism");
        }
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }

    pub fn build_reasoner(&self) -> Result<Box<dyn Reasoner>, HarnessError> {
        Ok(match &self.reasoner {
            ReasonerConfig::Mock(m) => Box::new(MockReasoner::new(m.clone())?),
            ReasonerConfig::Http(h) => Box::new(HttpReasoner::from_env(h.clone())?),
        })
    }

    /// Applies a dotted-path override such as `reasoner.window_width=12`.
    /// The value is parsed as JSON, falling back to a plain string.
    pub fn apply_override(v: &mut Value, assignment: &str) -> Result<(), HarnessError> {
        let (path, raw) = assignment
            .split_once('=')
            .ok_or_else(|| HarnessError::ConfigParse(format!("override '{assignment}' is not key=value")))?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let mut cur = v;
        let parts: Vec<&str> = path.split('.').collect();
        for (i, part) in parts.iter().enumerate() {
            let last = i + 1 == parts.len();
            cur = match cur {
                Value::Object(m) => {
                    if last {
                        m.insert(part.to_string(), value);
                        return Ok(());
                    }
                    m.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()))
                }
                Value::Array(a) => {
                    let idx: usize = part
                        .parse()
                        .map_err(|_| HarnessError::ConfigParse(format!("'{part}' in '{path}' is not an array index")))?;
                    let slot = a
                        .get_mut(idx)
                        .ok_or_else(|| HarnessError::ConfigParse(format!("index {idx} out of range in '{path}'")))?;
                    if last {
                        *slot = value;
                        return Ok(());
                    }
                    slot
                }
                _ => return Err(HarnessError::ConfigParse(format!("'{path}' does not name a config field"))),
            };
        }
        Ok(())
    }
}

/// Deterministic per-sample seed from the experiment seed and sample coordinates.
pub fn derive_seed(seed: u64, spec: &ComplexitySpec, iteration: u32, purpose: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(spec.kind().as_str().as_bytes());
    h.update(spec.params.to_value().to_string().as_bytes());
    h.update(spec.n.to_le_bytes());
    h.update(iteration.to_le_bytes());
    h.update(purpose.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("sha256 has 32 bytes"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub config_hash: String,
    pub created: DateTime<Utc>,
    pub schema_version: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Ok,
    ExtractionError,
    TransportError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Extracted {
    Answer(Answer),
    Error { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRef {
    pub kind: TaskKind,
    pub k_params: Value,
    pub scalar_k: u64,
    pub n: u32,
    pub seed: u64,
}

impl InstanceRef {
    pub fn complexity(&self) -> Result<ComplexitySpec, TaskError> {
        Ok(ComplexitySpec::new(KParams::from_value(self.kind, &self.k_params)?, self.n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    #[serde(flatten)]
    pub instance: InstanceRef,
    pub iteration: u32,
    pub model_id: String,
    pub completion_text: String,
    pub token_length: u64,
    pub extracted: Extracted,
    pub correct: bool,
    pub status: RecordStatus,
    pub timestamp: DateTime<Utc>,
    pub length_source: LengthSource,
    pub finish_reason: FinishReason,
}

impl GenerationRecord {
    fn cell_key(&self) -> (TaskKind, String, u32) {
        (self.instance.kind, self.instance.k_params.to_string(), self.instance.n)
    }
}

fn cell_key(spec: &ComplexitySpec) -> (TaskKind, String, u32) {
    (spec.kind(), spec.params.to_value().to_string(), spec.n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: ComplexitySpec,
    pub records: u32,
    pub correct: u32,
    pub transport_errors: u32,
    /// Fewer than M records, or some samples failed in transport.
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub records_written: u64,
    pub records_total: u64,
    pub cells_completed: usize,
    pub cells: Vec<CellSummary>,
}

/// Reads a dataset file, tolerating a torn final line.
pub fn read_dataset(path: &Path) -> Result<(Header, Vec<GenerationRecord>), HarnessError> {
    let (header, records, _) = scan(path)?;
    Ok((header, records))
}

/// Returns the header, the complete records, and the byte length of the
/// well-formed prefix.
fn scan(path: &Path) -> Result<(Header, Vec<GenerationRecord>, u64), HarnessError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    let mut good = 0u64;
    let mut header: Option<Header> = None;
    let mut records = Vec::new();
    let mut lineno = 0;
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(io_err(path))?;
        if read == 0 {
            break;
        }
        lineno += 1;
        if !line.ends_with('\n') {
            log::warn!("{}:{lineno}: ignoring torn final line", path.display());
            break;
        }
        let data_err = |message: String| HarnessError::Data { path: path.to_path_buf(), line: lineno, message };
        if header.is_none() {
            header = Some(serde_json::from_str(&line).map_err(|e| data_err(format!("bad header: {e}")))?);
        } else {
            records.push(serde_json::from_str(&line).map_err(|e| data_err(e.to_string()))?);
        }
        good += read as u64;
    }
    let header = header.ok_or_else(|| HarnessError::Data {
        path: path.to_path_buf(),
        line: 0,
        message: "missing header line".into(),
    })?;
    Ok((header, records, good))
}

struct Job {
    spec: ComplexitySpec,
    iteration: u32,
}

fn sample_one(
    config: &ExperimentConfig,
    reasoner: &dyn Reasoner,
    job: &Job,
) -> Result<GenerationRecord, HarnessError> {
    let seed = derive_seed(config.seed, &job.spec, job.iteration, "instance");
    let instance = generate_instance(&job.spec, seed)?;
    let request = CompletionRequest {
        prompt: instance.prompt.clone(),
        temperature: config.temperature,
        max_tokens: config.max_tokens,
        model_id: config.model_id.clone(),
    };
    let completion_seed = derive_seed(config.seed, &job.spec, job.iteration, "completion");
    let (completion, status, extracted, correct) = match reasoner.complete(&instance, &request, completion_seed) {
        Ok(c) => match extract_answer_with(instance.kind(), &c.text, config.extraction) {
            Ok(a) => {
                let ok = judge_with(&instance, &a, config.judging);
                (c, RecordStatus::Ok, Extracted::Answer(a), ok)
            }
            Err(e) => {
                log::debug!("{} iteration {}: {e}", job.spec, job.iteration);
                (c, RecordStatus::ExtractionError, Extracted::Error { error: e.tag().to_string() }, false)
            }
        },
        Err(e @ (ReasonerError::Transport { .. } | ReasonerError::Provider { .. })) => {
            log::warn!("{} iteration {}: {e}", job.spec, job.iteration);
            let tag = if matches!(e, ReasonerError::Transport { .. }) { "transport" } else { "provider" };
            let empty = Completion {
                text: e.to_string(),
                token_length: 0,
                finish_reason: FinishReason::Error,
                latency_ms: 0,
                length_source: LengthSource::Provider,
            };
            (empty, RecordStatus::TransportError, Extracted::Error { error: tag.to_string() }, false)
        }
        Err(e) => return Err(e.into()),
    };
    let line = instance.to_line();
    Ok(GenerationRecord {
        instance: InstanceRef { kind: line.kind, k_params: line.k_params, scalar_k: line.scalar_k, n: line.n, seed },
        iteration: job.iteration,
        model_id: config.model_id.clone(),
        completion_text: completion.text,
        token_length: completion.token_length,
        extracted,
        correct,
        status,
        timestamp: Utc::now(),
        length_source: completion.length_source,
        finish_reason: completion.finish_reason,
    })
}

/// Runs (or, with `resume`, completes) the experiment. Without `resume` an
/// existing output file is replaced.
pub fn run_experiment(config: &ExperimentConfig, reasoner: &dyn Reasoner, resume: bool) -> Result<RunSummary, HarnessError> {
    config.validate()?;
    let path = config.output_path.as_path();
    let hash = config.config_hash();
    let cells = config.cells()?;
    let mut existing: Vec<GenerationRecord> = Vec::new();

    let mut file = if resume && path.exists() {
        let (header, records, good) = scan(path)?;
        if header.config_hash != hash {
            return Err(HarnessError::HashMismatch { path: path.to_path_buf(), expected: hash, found: header.config_hash });
        }
        existing = records;
        let mut f = OpenOptions::new().read(true).write(true).open(path).map_err(io_err(path))?;
        f.set_len(good).map_err(io_err(path))?;
        f.seek(SeekFrom::End(0)).map_err(io_err(path))?;
        f
    } else {
        if resume {
            log::info!("{} does not exist; starting a fresh run", path.display());
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        let mut f = File::create(path).map_err(io_err(path))?;
        let header = Header { config_hash: hash.clone(), created: Utc::now(), schema_version: SCHEMA_VERSION };
        writeln!(f, "{}", serde_json::to_string(&header).expect("header serializes")).map_err(io_err(path))?;
        f.flush().map_err(io_err(path))?;
        f
    };

    let mut done: HashSet<((TaskKind, String, u32), u32)> = HashSet::new();
    existing.retain(|r| done.insert((r.cell_key(), r.iteration)));
    let jobs: Vec<Job> = cells
        .iter()
        .flat_map(|spec| (0..config.samples_per_cell).map(move |iteration| Job { spec: *spec, iteration }))
        .filter(|j| !done.contains(&(cell_key(&j.spec), j.iteration)))
        .collect();
    log::info!("{} samples to draw across {} cells", jobs.len(), cells.len());

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let mut fresh: Vec<GenerationRecord> = Vec::new();
    let mut failure: Option<HarnessError> = None;
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<Result<GenerationRecord, HarnessError>>();
        for _ in 0..config.parallelism.min(jobs.len().max(1)) {
            let tx = tx.clone();
            let (jobs, next, stop) = (&jobs, &next, &stop);
            scope.spawn(move || {
                while !stop.load(Ordering::Relaxed) {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(job) = jobs.get(i) else { break };
                    if tx.send(sample_one(config, reasoner, job)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);
        for msg in rx {
            if failure.is_some() {
                continue;
            }
            let written = msg.and_then(|rec| {
                let line = serde_json::to_string(&rec).expect("record serializes");
                writeln!(file, "{line}").and_then(|_| file.flush()).map_err(io_err(path))?;
                Ok(rec)
            });
            match written {
                Ok(rec) => fresh.push(rec),
                Err(e) => {
                    stop.store(true, Ordering::Relaxed);
                    failure = Some(e);
                }
            }
        }
    });
    if let Some(e) = failure {
        log::error!("run aborted after {} new records; {} holds partial data", fresh.len(), path.display());
        return Err(e);
    }

    let records_written = fresh.len() as u64;
    existing.extend(fresh);
    let summary = summarize(config, &cells, &existing, records_written);
    Ok(summary)
}

fn summarize(config: &ExperimentConfig, cells: &[ComplexitySpec], records: &[GenerationRecord], written: u64) -> RunSummary {
    let mut by_cell: BTreeMap<(TaskKind, String, u32), (u32, u32, u32)> = BTreeMap::new();
    for r in records {
        let e = by_cell.entry(r.cell_key()).or_default();
        e.0 += 1;
        e.1 += r.correct as u32;
        e.2 += (r.status == RecordStatus::TransportError) as u32;
    }
    let cells: Vec<CellSummary> = cells
        .iter()
        .map(|spec| {
            let (records, correct, transport_errors) = by_cell.get(&cell_key(spec)).copied().unwrap_or_default();
            CellSummary {
                cell: *spec,
                records,
                correct,
                transport_errors,
                partial: records < config.samples_per_cell || transport_errors > 0,
            }
        })
        .collect();
    RunSummary {
        records_written: written,
        records_total: records.len() as u64,
        cells_completed: cells.iter().filter(|c| !c.partial).count(),
        cells,
    }
}

/// True iff accuracy clears chance by at least one binomial standard
/// deviation of the chance rate at this sample count.
pub fn inclusion_gate(records: &[GenerationRecord], chance: f64) -> bool {
    if records.is_empty() {
        return false;
    }
    let count = records.len() as f64;
    let acc = records.iter().filter(|r| r.correct).count() as f64 / count;
    gate(acc, count as u64, chance)
}

pub fn gate(accuracy: f64, count: u64, chance: f64) -> bool {
    // a perfect score clears any chance rate below 1, even when one SD overshoots 1
    let threshold = chance + (chance * (1.0 - chance) / count as f64).sqrt();
    accuracy >= threshold.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{
                "version": 1,
                "tasks": [{{"kind": "index_tracking", "k_params": [{{"k_s": 3, "k_m": 3}}], "n": [2, 5]}},
                          {{"kind": "dyck", "k_params": [{{"depth": 2, "types": 2}}], "n": [8]}}],
                "model_id": "mock",
                "samples_per_cell": 20,
                "seed": 9,
                "output_path": "{}",
                "parallelism": 3,
                "reasoner": {{"type": "mock", "noise": {{"per_step_error": 0.05, "guess_baseline": 0.1}},
                              "peak_length_coeffs": [40, 5], "window_width": 10, "derail_past_peak": 0.01,
                              "length_spread": 0.5}}
            }}"#,
            dir.join("out.jsonl").display()
        ))
        .unwrap()
    }

    #[test]
    fn gate_examples() {
        assert!(gate(0.60, 100, 0.5));
        assert!(!gate(0.54, 100, 0.5));
        assert!(gate(1.0, 1, 0.99));
    }

    #[test]
    fn run_writes_header_and_m_records_per_cell() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path());
        let reasoner = cfg.build_reasoner().unwrap();
        let s = run_experiment(&cfg, reasoner.as_ref(), false).unwrap();
        assert_eq!(s.records_written, 60);
        assert_eq!(s.cells_completed, 3);
        let (header, recs) = read_dataset(&cfg.output_path).unwrap();
        assert_eq!(header.config_hash, cfg.config_hash());
        assert_eq!(header.schema_version, 1);
        assert_eq!(recs.len(), 60);
        assert!(recs.iter().all(|r| !r.correct || r.status == RecordStatus::Ok));

        let again = run_experiment(&cfg, reasoner.as_ref(), true).unwrap();
        assert_eq!(again.records_written, 0);
        assert_eq!(again.records_total, 60);
    }

    #[test]
    fn hash_ignores_output_location_and_workers() {
        let dir = tempfile::tempdir().unwrap();
        let a = config(dir.path());
        let mut b = a.clone();
        b.output_path = PathBuf::from("/elsewhere.jsonl");
        b.parallelism = 9;
        assert_eq!(a.config_hash(), b.config_hash());
        b.samples_per_cell = 21;
        assert_ne!(a.config_hash(), b.config_hash());
    }

    #[test]
    fn overrides_follow_dotted_paths() {
        let dir = tempfile::tempdir().unwrap();
        let mut v = serde_json::to_value(config(dir.path())).unwrap();
        ExperimentConfig::apply_override(&mut v, "reasoner.window_width=12.5").unwrap();
        ExperimentConfig::apply_override(&mut v, "tasks.0.n=[3]").unwrap();
        ExperimentConfig::apply_override(&mut v, "model_id=other").unwrap();
        let cfg = ExperimentConfig::from_value(v.clone()).unwrap();
        assert_eq!(cfg.tasks[0].n, vec![3]);
        assert_eq!(cfg.model_id, "other");
        assert!(matches!(&cfg.reasoner, ReasonerConfig::Mock(m) if m.window_width == 12.5));
        assert!(ExperimentConfig::apply_override(&mut v, "tasks.7.n=1").is_err());
    }

    #[test]
    fn seeds_depend_on_every_coordinate() {
        let a = ComplexitySpec::new(KParams::WebOfLies { people: 3 }, 3);
        let b = ComplexitySpec::new(KParams::WebOfLies { people: 4 }, 4);
        let s = derive_seed(1, &a, 0, "instance");
        assert_eq!(s, derive_seed(1, &a, 0, "instance"));
        assert_ne!(s, derive_seed(2, &a, 0, "instance"));
        assert_ne!(s, derive_seed(1, &b, 0, "instance"));
        assert_ne!(s, derive_seed(1, &a, 1, "instance"));
        assert_ne!(s, derive_seed(1, &a, 0, "completion"));
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(matches!(ExperimentConfig::from_json("{not json"), Err(HarnessError::ConfigParse(_))));
        let dir = tempfile::tempdir().unwrap();
        let mut v = serde_json::to_value(config(dir.path())).unwrap();
        v["samples_per_cell"] = 0.into();
        assert!(matches!(ExperimentConfig::from_value(v.clone()), Err(HarnessError::ConfigInvalid(_))));
        v["samples_per_cell"] = 5.into();
        v["tasks"][1]["n"] = serde_json::json!([7]);
        assert!(ExperimentConfig::from_value(v).is_err());
    }
}
