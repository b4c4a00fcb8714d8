//! Blocking client for the chat-completions protocol.

use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{approximate_tokens, Completion, CompletionRequest, FinishReason, LengthSource, Reasoner, ReasonerError};
use crate::taskgen::TaskInstance;

pub const ENV_API_KEY: &str = "CRITLEN_API_KEY";
pub const ENV_BASE_URL: &str = "CRITLEN_BASE_URL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HttpConfig {
    /// Falls back to `CRITLEN_BASE_URL` when absent.
    pub base_url: Option<String>,
    /// Retries after the first attempt for 429, 5xx and network failures.
    pub max_retries: u32,
    pub initial_backoff_ms: u64,
    pub max_backoff_ms: u64,
    pub timeout_secs: u64,
    pub max_in_flight: usize,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig {
            base_url: None,
            max_retries: 5,
            initial_backoff_ms: 500,
            max_backoff_ms: 30_000,
            timeout_secs: 600,
            max_in_flight: 8,
        }
    }
}

/// Counting semaphore bounding concurrent requests.
struct InFlight {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a InFlight);

impl InFlight {
    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().expect("semaphore poisoned");
        while *free == 0 {
            free = self.cv.wait(free).expect("semaphore poisoned");
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().expect("semaphore poisoned") += 1;
        self.0.cv.notify_one();
    }
}

pub struct HttpReasoner {
    agent: ureq::Agent,
    endpoint: String,
    api_key: Option<String>,
    config: HttpConfig,
    in_flight: InFlight,
}

enum Attempt {
    Done(Result<Completion, ReasonerError>),
    Retry(String),
}

impl HttpReasoner {
    /// Reads the API key from `CRITLEN_API_KEY` and the base URL from the
    /// config or `CRITLEN_BASE_URL`.
    pub fn from_env(config: HttpConfig) -> Result<Self, ReasonerError> {
        let base = config
            .base_url
            .clone()
            .or_else(|| std::env::var(ENV_BASE_URL).ok())
            .ok_or_else(|| ReasonerError::Config(format!("no base_url configured and {ENV_BASE_URL} is unset")))?;
        Self::new(base, std::env::var(ENV_API_KEY).ok(), config)
    }

    pub fn new(base_url: String, api_key: Option<String>, config: HttpConfig) -> Result<Self, ReasonerError> {
        if config.max_in_flight == 0 {
            return Err(ReasonerError::Config("max_in_flight must be >= 1".into()));
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .build()
            .into();
        Ok(HttpReasoner {
            agent,
            endpoint: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key,
            in_flight: InFlight { free: Mutex::new(config.max_in_flight), cv: Condvar::new() },
            config,
        })
    }

    pub fn complete_request(&self, request: &CompletionRequest) -> Result<Completion, ReasonerError> {
        request.validate()?;
        let _permit = self.in_flight.acquire();
        let body = json!({
            "model": request.model_id,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        });
        let started = Instant::now();
        let mut backoff = self.config.initial_backoff_ms;
        let mut attempts = 0;
        loop {
            attempts += 1;
            match self.attempt(&body, request, started) {
                Attempt::Done(result) => return result,
                Attempt::Retry(message) => {
                    if attempts > self.config.max_retries {
                        return Err(ReasonerError::Transport { attempts, message });
                    }
                    log::warn!("attempt {attempts} failed ({message}); retrying in {backoff} ms");
                    std::thread::sleep(Duration::from_millis(backoff));
                    backoff = (backoff.saturating_mul(2)).min(self.config.max_backoff_ms);
                }
            }
        }
    }

    fn attempt(&self, body: &Value, request: &CompletionRequest, started: Instant) -> Attempt {
        let mut req = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let mut resp = match req.send_json(body) {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status().as_u16();
        let payload = match resp.body_mut().read_to_string() {
            Ok(p) => p,
            Err(e) => return Attempt::Retry(format!("reading body: {e}")),
        };
        match status {
            200..=299 => Attempt::Done(parse_completion(status, &payload, request, started)),
            401 | 403 => Attempt::Done(Err(ReasonerError::Credential { status })),
            429 | 500..=599 => Attempt::Retry(format!("HTTP {status}")),
            _ => Attempt::Done(Err(ReasonerError::Provider { status, payload })),
        }
    }
}

fn parse_completion(
    status: u16,
    payload: &str,
    request: &CompletionRequest,
    started: Instant,
) -> Result<Completion, ReasonerError> {
    let provider = || ReasonerError::Provider { status, payload: payload.to_string() };
    let v: Value = serde_json::from_str(payload).map_err(|_| provider())?;
    let choice = v.get("choices").and_then(|c| c.get(0)).ok_or_else(provider)?;
    let text = choice
        .pointer("/message/content")
        .and_then(Value::as_str)
        .ok_or_else(provider)?
        .to_string();
    let (token_length, length_source) = match v.pointer("/usage/completion_tokens").and_then(Value::as_u64) {
        Some(n) => (n, LengthSource::Provider),
        None => (approximate_tokens(&text), LengthSource::Approximate),
    };
    let finish_reason = match choice.get("finish_reason").and_then(Value::as_str) {
        Some("length") => FinishReason::Length,
        _ if token_length >= request.max_tokens as u64 && length_source == LengthSource::Provider => FinishReason::Length,
        _ => FinishReason::Stop,
    };
    Ok(Completion {
        text,
        token_length,
        finish_reason,
        latency_ms: started.elapsed().as_millis() as u64,
        length_source,
    })
}

impl Reasoner for HttpReasoner {
    fn complete(&self, _instance: &TaskInstance, request: &CompletionRequest, _seed: u64) -> Result<Completion, ReasonerError> {
        self.complete_request(request)
    }
}
