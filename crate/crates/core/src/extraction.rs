//! Answer extraction and correctness judging.
//!
//! Thinking segments are removed first, then the last `[ANSWER]...[/ANSWER]`
//! block is located and its final line parsed according to the task's answer
//! domain. Every input yields either an [`Answer`] or an [`ExtractionError`].

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taskgen::{Answer, AnswerDomain, TaskInstance, TaskKind};

pub const OPEN_TAG: &str = "[ANSWER]";
pub const CLOSE_TAG: &str = "[/ANSWER]";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractionError {
    #[error("no well-formed [ANSWER] block")]
    NoBlock,
    #[error("cannot read {domain} from {raw:?}")]
    Value { raw: String, domain: &'static str },
}

impl ExtractionError {
    /// Short tag stored in generation records.
    pub fn tag(&self) -> &'static str {
        match self {
            ExtractionError::NoBlock => "no_block",
            ExtractionError::Value { .. } => "bad_value",
        }
    }
}

/// How a kind's answer is delimited and typed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionRule {
    pub kind: TaskKind,
    pub open_tag: &'static str,
    pub close_tag: &'static str,
    pub label: &'static str,
    pub value_domain: AnswerDomain,
}

impl ExtractionRule {
    pub fn for_kind(kind: TaskKind) -> Self {
        ExtractionRule {
            kind,
            open_tag: OPEN_TAG,
            close_tag: CLOSE_TAG,
            label: kind.answer_label(),
            value_domain: kind.answer_domain(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractOptions {
    /// Accept Yes/No for True/False kinds and vice versa.
    pub boolean_synonyms: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { boolean_synonyms: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct JudgeOptions {
    /// Require IndexTracking answers inside `[0, length)` instead of comparing modulo the length.
    pub strict_range: bool,
}

macro_rules! regex {
    ($re:literal) => {{
        static RE: OnceLock<Regex> = OnceLock::new();
        RE.get_or_init(|| Regex::new($re).expect("valid regex"))
    }};
}

/// Removes closed thinking segments, anything after an unclosed `<think>`,
/// and anything before a stray `</think>`.
pub fn strip_thinking(output: &str) -> String {
    let closed = regex!(r"(?is)<think>.*?</think>").replace_all(output, "");
    let mut rest: &str = &closed;
    if let Some(m) = regex!(r"(?i)</think>").find_iter(rest).last() {
        rest = &rest[m.end()..];
    }
    if let Some(m) = regex!(r"(?i)<think>").find(rest) {
        rest = &rest[..m.start()];
    }
    rest.to_string()
}

/// Contents of the last well-formed answer block, if any.
pub fn last_block(text: &str) -> Option<&str> {
    let close = regex!(r"(?i)\[/ANSWER\]").find_iter(text).last()?;
    let head = &text[..close.start()];
    let open = regex!(r"(?i)\[ANSWER\]").find_iter(head).last()?;
    Some(&head[open.end()..])
}

fn value_text<'a>(block: &'a str, label: &str) -> &'a str {
    let lines: Vec<&str> = block.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let lower_label = label.to_ascii_lowercase();
    let labelled = lines.iter().rev().find(|l| l.to_ascii_lowercase().starts_with(&lower_label));
    if let Some(line) = labelled {
        // labels are ASCII so the byte offset is valid in the original line
        return line[label.len()..].trim();
    }
    let Some(line) = lines.last() else { return "" };
    if let Some(i) = line.rfind("==") {
        return line[i + 2..].trim();
    }
    if let Some(m) = regex!(r"(?i)answer\s*:").find_iter(line).last() {
        return line[m.end()..].trim();
    }
    line
}

fn unwrap_value(raw: &str) -> &str {
    let mut v = raw.trim();
    loop {
        let before = v;
        v = v.trim_end_matches('.').trim();
        for (open, close) in [("**", "**"), ("\"", "\""), ("'", "'"), ("`", "`")] {
            if v.len() >= open.len() + close.len() && v.starts_with(open) && v.ends_with(close) {
                v = v[open.len()..v.len() - close.len()].trim();
            }
        }
        if v == before {
            return v;
        }
    }
}

fn parse_boolean(kind: TaskKind, v: &str, opts: ExtractOptions) -> Option<bool> {
    let yes_no = kind == TaskKind::WebOfLies;
    match v.to_ascii_lowercase().as_str() {
        "true" if !yes_no || opts.boolean_synonyms => Some(true),
        "false" if !yes_no || opts.boolean_synonyms => Some(false),
        "yes" if yes_no || opts.boolean_synonyms => Some(true),
        "no" if yes_no || opts.boolean_synonyms => Some(false),
        _ => None,
    }
}

pub fn extract_answer(kind: TaskKind, output: &str) -> Result<Answer, ExtractionError> {
    extract_answer_with(kind, output, ExtractOptions::default())
}

pub fn extract_answer_with(kind: TaskKind, output: &str, opts: ExtractOptions) -> Result<Answer, ExtractionError> {
    let rule = ExtractionRule::for_kind(kind);
    let visible = strip_thinking(output);
    let block = last_block(&visible).ok_or(ExtractionError::NoBlock)?;
    let raw = value_text(block, rule.label);
    let v = unwrap_value(raw);
    let bad = |domain| ExtractionError::Value { raw: raw.to_string(), domain };
    match rule.value_domain {
        AnswerDomain::Integer => v.parse::<i64>().map(Answer::Integer).map_err(|_| bad("integer")),
        AnswerDomain::Boolean => parse_boolean(kind, v, opts).map(Answer::Boolean).ok_or_else(|| bad("boolean")),
        AnswerDomain::Text => {
            if v.is_empty() {
                Err(bad("text"))
            } else {
                Ok(Answer::Text(v.to_string()))
            }
        }
    }
}

fn normalize_text(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

pub fn judge(instance: &TaskInstance, answer: &Answer) -> bool {
    judge_with(instance, answer, JudgeOptions::default())
}

pub fn judge_with(instance: &TaskInstance, answer: &Answer, opts: JudgeOptions) -> bool {
    match (&instance.ground_truth, answer) {
        (Answer::Integer(truth), Answer::Integer(got)) => match instance.kind() {
            TaskKind::IndexTracking if !opts.strict_range => {
                let len = instance.array_length().expect("index tracking has an array length");
                got.rem_euclid(len) == truth.rem_euclid(len)
            }
            _ => got == truth,
        },
        (Answer::Boolean(truth), Answer::Boolean(got)) => truth == got,
        (Answer::Text(truth), Answer::Text(got)) => normalize_text(truth) == normalize_text(got),
        (truth, got) => {
            log::warn!("answer domain mismatch: truth {truth:?}, extracted {got:?}");
            false
        }
    }
}

/// Canonical answer block for `answer`, as a compliant model would write it.
pub fn canonical_block(kind: TaskKind, answer: &Answer) -> String {
    let value = match (kind, answer) {
        (TaskKind::WebOfLies, Answer::Boolean(true)) => "Yes".to_string(),
        (TaskKind::WebOfLies, Answer::Boolean(false)) => "No".to_string(),
        (_, a) => a.to_string(),
    };
    format!("{OPEN_TAG}\n{} {value}\n{CLOSE_TAG}", kind.answer_label())
}
