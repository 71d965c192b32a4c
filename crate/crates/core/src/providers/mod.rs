//! Clients for the two external services: a chat-completions endpoint for
//! generation and the scoring sidecar for neural metrics.

mod cache;
mod chat;
mod limit;
mod sidecar;

use std::time::Duration;

use thiserror::Error;

pub use cache::{cache_key, ResponseCache};
pub use chat::{ChatBackend, ChatClient, ChatRequest, EndpointConfig, HttpChat, Message, Role, SendError, DEFAULT_MAX_NEW_TOKENS};
pub use limit::{Permit, Semaphore};
pub use sidecar::{Health, ScorerKind, ScorerRequest, SidecarClient, SidecarConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProviderError {
    #[error("endpoint unavailable after {attempts} attempts: {last}")]
    EndpointUnavailable { attempts: u32, last: String },
    #[error("request rejected with HTTP {status}: {message}")]
    BadRequest { status: u16, message: String },
    #[error("endpoint returned an empty completion")]
    EmptyCompletion,
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("scoring sidecar unavailable: {0}")]
    ScorerUnavailable(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("cache: {0}")]
    Cache(String),
}

/// Exponential backoff: attempt `k` (0-based) waits `base * 2^(k-1)` before
/// it runs; the first attempt does not wait.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_secs(1),
        }
    }
}

impl RetryPolicy {
    pub fn delay_before(&self, attempt: u32) -> Duration {
        if attempt == 0 {
            Duration::ZERO
        } else {
            self.base_delay * 2u32.saturating_pow(attempt - 1)
        }
    }

    /// Runs `op` until it succeeds, fails permanently, or attempts run out.
    /// Returns the number of attempts used alongside the outcome.
    pub(crate) fn run<T>(&self, mut op: impl FnMut() -> Result<T, SendError>) -> (u32, Result<T, SendError>) {
        let attempts = self.attempts.max(1);
        let mut last = None;
        for k in 0..attempts {
            std::thread::sleep(self.delay_before(k));
            match op() {
                Err(SendError::Transient(msg)) => last = Some(SendError::Transient(msg)),
                other => return (k + 1, other),
            }
        }
        (attempts, Err(last.expect("at least one attempt")))
    }
}

/// Shared HTTP agent: no status-as-error so 4xx bodies can be read.
pub(crate) fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder()
        .http_status_as_error(false)
        .timeout_global(Some(timeout))
        .build()
        .into()
}

/// Classifies a finished HTTP exchange.
pub(crate) fn read_response(result: Result<ureq::http::Response<ureq::Body>, ureq::Error>) -> Result<serde_json::Value, SendError> {
    let mut resp = result.map_err(|e| SendError::Transient(e.to_string()))?;
    let status = resp.status().as_u16();
    let body = resp
        .body_mut()
        .read_to_string()
        .map_err(|e| SendError::Transient(e.to_string()))?;
    if status >= 500 {
        return Err(SendError::Transient(format!("HTTP {status}: {body}")));
    }
    if status >= 400 {
        let message = serde_json::from_str::<serde_json::Value>(&body)
            .ok()
            .and_then(|v| {
                v.pointer("/error/message")
                    .or_else(|| v.get("error"))
                    .or_else(|| v.get("detail"))
                    .and_then(|m| m.as_str().map(str::to_string))
            })
            .unwrap_or(body);
        return Err(SendError::Rejected { status, message });
    }
    serde_json::from_str(&body).map_err(|e| SendError::Malformed(format!("{e}: {body}")))
}
