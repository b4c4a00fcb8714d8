//! Answer-producing reasoners: a chat-completions HTTP client and an offline
//! mock that realizes the noisy-automaton model with a tunable optimal length.

mod http;
mod mock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::taskgen::TaskInstance;

pub use http::{HttpConfig, HttpReasoner, ENV_API_KEY, ENV_BASE_URL};
pub use mock::{mock_complete, MockReasoner, MockReasonerConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub prompt: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub model_id: String,
}

impl CompletionRequest {
    pub fn validate(&self) -> Result<(), ReasonerError> {
        if self.prompt.is_empty() {
            return Err(ReasonerError::InvalidRequest("prompt is empty".into()));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(ReasonerError::InvalidRequest(format!("temperature {} < 0", self.temperature)));
        }
        if self.max_tokens == 0 {
            return Err(ReasonerError::InvalidRequest("max_tokens must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishReason {
    Stop,
    Length,
    Error,
}

/// Where `token_length` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthSource {
    Provider,
    /// `ceil(bytes / 4)`, used when the provider reports no usage.
    Approximate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub text: String,
    /// Generation length L, including any thinking segment.
    pub token_length: u64,
    pub finish_reason: FinishReason,
    pub latency_ms: u64,
    pub length_source: LengthSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("credential rejected (HTTP {status})")]
    Credential { status: u16 },
    #[error("provider error (HTTP {status}): {payload}")]
    Provider { status: u16, payload: String },
    #[error("configuration error: {0}")]
    Config(String),
}

/// Anything that can answer a task prompt. `seed` makes sampling reproducible
/// where the backend allows it.
pub trait Reasoner: Send + Sync {
    fn complete(
        &self,
        instance: &TaskInstance,
        request: &CompletionRequest,
        seed: u64,
    ) -> Result<Completion, ReasonerError>;
}

/// Whitespace-delimited word count, the mock's token measure.
pub fn word_count(text: &str) -> u64 {
    text.split_whitespace().count() as u64
}

/// Length estimate for providers without a usage field.
pub fn approximate_tokens(text: &str) -> u64 {
    (text.len() as u64).div_ceil(4)
}
