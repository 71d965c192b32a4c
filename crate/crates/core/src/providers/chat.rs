use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::cache::{cache_key, ResponseCache};
use super::limit::Semaphore;
use super::{agent, read_response, ProviderError, RetryPolicy};

pub const DEFAULT_MAX_NEW_TOKENS: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

/// One generation request. `temperature` and `top_p` are omitted from the
/// wire body when unset so the server applies its own defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<Message>,
    pub max_new_tokens: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub top_p: Option<f64>,
}

impl ChatRequest {
    /// A single user message with default decoding.
    pub fn user(model: impl Into<String>, content: impl Into<String>) -> Self {
        ChatRequest {
            model: model.into(),
            messages: vec![Message {
                role: Role::User,
                content: content.into(),
            }],
            max_new_tokens: DEFAULT_MAX_NEW_TOKENS,
            temperature: None,
            top_p: None,
        }
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        if !self.messages.iter().any(|m| m.role == Role::User) {
            return Err(ProviderError::InvalidRequest("at least one user message is required".into()));
        }
        if self.max_new_tokens == 0 {
            return Err(ProviderError::InvalidRequest("max_new_tokens must be positive".into()));
        }
        Ok(())
    }

    /// JSON body for `POST /v1/chat/completions`.
    pub fn wire_body(&self) -> serde_json::Value {
        let mut body = json!({
            "model": self.model,
            "messages": self.messages,
            "max_tokens": self.max_new_tokens,
        });
        if let Some(t) = self.temperature {
            body["temperature"] = json!(t);
        }
        if let Some(p) = self.top_p {
            body["top_p"] = json!(p);
        }
        body
    }
}

/// Outcome of a single attempt against a backend.
#[derive(Debug, Clone, PartialEq)]
pub enum SendError {
    /// Transport failure or 5xx: worth retrying.
    Transient(String),
    /// 4xx: the server refused the request.
    Rejected { status: u16, message: String },
    Malformed(String),
}

/// One round trip to a generation service. Implemented over HTTP by
/// [`HttpChat`]; tests substitute in-process fakes.
pub trait ChatBackend: Send + Sync {
    /// Identifies the endpoint in cache keys.
    fn endpoint(&self) -> &str;
    fn send(&self, req: &ChatRequest) -> Result<String, SendError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model: String,
    /// Header carrying the API key. For `Authorization` the key is sent as a
    /// bearer token.
    pub api_key_header: String,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
    pub timeout_secs: u64,
    pub concurrency: usize,
    pub retry_base_ms: u64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "http://127.0.0.1:8000".into(),
            model: "default".into(),
            api_key_header: "Authorization".into(),
            api_key: None,
            timeout_secs: 300,
            concurrency: 4,
            retry_base_ms: 1000,
        }
    }
}

impl EndpointConfig {
    pub(crate) fn auth_header(&self) -> Option<(String, String)> {
        let key = self.api_key.as_ref()?;
        let value = if self.api_key_header.eq_ignore_ascii_case("authorization") && !key.contains(' ') {
            format!("Bearer {key}")
        } else {
            key.clone()
        };
        Some((self.api_key_header.clone(), value))
    }

    pub fn retry_policy(&self) -> RetryPolicy {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(self.retry_base_ms),
        }
    }
}

pub struct HttpChat {
    url: String,
    auth: Option<(String, String)>,
    agent: ureq::Agent,
}

impl HttpChat {
    pub fn new(config: &EndpointConfig) -> Self {
        HttpChat {
            url: format!("{}/v1/chat/completions", config.base_url.trim_end_matches('/')),
            auth: config.auth_header(),
            agent: agent(Duration::from_secs(config.timeout_secs)),
        }
    }
}

impl ChatBackend for HttpChat {
    fn endpoint(&self) -> &str {
        &self.url
    }

    fn send(&self, req: &ChatRequest) -> Result<String, SendError> {
        let mut call = self.agent.post(&self.url);
        if let Some((k, v)) = &self.auth {
            call = call.header(k, v);
        }
        let value = read_response(call.send_json(req.wire_body()))?;
        match value.pointer("/choices/0/message/content") {
            Some(serde_json::Value::String(s)) => Ok(s.clone()),
            Some(serde_json::Value::Null) => Ok(String::new()),
            _ => Err(SendError::Malformed(format!("no choices[0].message.content in {value}"))),
        }
    }
}

/// Cached, retrying, concurrency-limited chat client.
pub struct ChatClient {
    backend: Box<dyn ChatBackend>,
    cache: ResponseCache,
    retry: RetryPolicy,
    limit: Semaphore,
}

impl ChatClient {
    pub fn new(backend: Box<dyn ChatBackend>, cache: ResponseCache, retry: RetryPolicy, concurrency: usize) -> Self {
        ChatClient {
            backend,
            cache,
            retry,
            limit: Semaphore::new(concurrency),
        }
    }

    pub fn http(config: &EndpointConfig, cache: ResponseCache) -> Self {
        Self::new(
            Box::new(HttpChat::new(config)),
            cache,
            config.retry_policy(),
            config.concurrency,
        )
    }

    pub fn cache_key(&self, req: &ChatRequest) -> String {
        cache_key(self.backend.endpoint(), req)
    }

    /// Returns the assistant text for `req`, from cache when possible.
    pub fn chat(&self, req: &ChatRequest) -> Result<String, ProviderError> {
        req.validate()?;
        let key = self.cache_key(req);
        let slot = self.cache.slot(&key);
        let _guard = slot.lock().unwrap();
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit);
        }
        let (attempts, outcome) = {
            let _permit = self.limit.acquire();
            self.retry.run(|| self.backend.send(req))
        };
        let text = match outcome {
            Ok(text) => text,
            Err(SendError::Transient(last)) => return Err(ProviderError::EndpointUnavailable { attempts, last }),
            Err(SendError::Rejected { status, message }) => return Err(ProviderError::BadRequest { status, message }),
            Err(SendError::Malformed(m)) => return Err(ProviderError::MalformedResponse(m)),
        };
        if text.trim().is_empty() {
            return Err(ProviderError::EmptyCompletion);
        }
        self.cache.put(&key, &text)?;
        Ok(text)
    }
}
