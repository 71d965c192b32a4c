use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::chat::SendError;
use super::limit::Semaphore;
use super::{agent, read_response, ProviderError, RetryPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    EmbedSbert,
    EmbedLuar,
    EmbedStylecav,
    ScoreMis,
    ScoreCola,
    ClassifyFormality,
}

impl ScorerKind {
    pub const ALL: [ScorerKind; 6] = [
        ScorerKind::EmbedSbert,
        ScorerKind::EmbedLuar,
        ScorerKind::EmbedStylecav,
        ScorerKind::ScoreMis,
        ScorerKind::ScoreCola,
        ScorerKind::ClassifyFormality,
    ];

    pub fn is_embedding(self) -> bool {
        matches!(self, ScorerKind::EmbedSbert | ScorerKind::EmbedLuar | ScorerKind::EmbedStylecav)
    }

    pub fn wants_pairs(self) -> bool {
        self == ScorerKind::ScoreMis
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScorerKind::EmbedSbert => "embed_sbert",
            ScorerKind::EmbedLuar => "embed_luar",
            ScorerKind::EmbedStylecav => "embed_stylecav",
            ScorerKind::ScoreMis => "score_mis",
            ScorerKind::ScoreCola => "score_cola",
            ScorerKind::ClassifyFormality => "classify_formality",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerRequest {
    pub kind: ScorerKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub texts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(String, String)>>,
}

impl ScorerRequest {
    pub fn texts(kind: ScorerKind, texts: Vec<String>) -> Self {
        ScorerRequest { kind, texts, pairs: None }
    }

    pub fn pairs(kind: ScorerKind, pairs: Vec<(String, String)>) -> Self {
        ScorerRequest {
            kind,
            texts: Vec::new(),
            pairs: Some(pairs),
        }
    }

    /// Pairs are required for MIS and forbidden otherwise.
    pub fn validate(&self) -> Result<(), ProviderError> {
        match (self.kind.wants_pairs(), &self.pairs) {
            (true, None) => Err(ProviderError::InvalidRequest(format!("{} requires pairs", self.kind.as_str()))),
            (true, Some(_)) if !self.texts.is_empty() => {
                Err(ProviderError::InvalidRequest(format!("{} takes pairs, not texts", self.kind.as_str())))
            }
            (false, Some(_)) => Err(ProviderError::InvalidRequest(format!("{} takes texts, not pairs", self.kind.as_str()))),
            _ => Ok(()),
        }
    }

    fn len(&self) -> usize {
        self.pairs.as_ref().map_or(self.texts.len(), Vec::len)
    }

    fn wire_body(&self) -> serde_json::Value {
        match &self.pairs {
            Some(p) => json!({"kind": self.kind, "pairs": p}),
            None => json!({"kind": self.kind, "texts": self.texts}),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub kinds: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SidecarConfig {
    pub base_url: String,
    pub timeout_secs: u64,
    pub concurrency: usize,
    pub retry_base_ms: u64,
    /// Optional shared-secret header `(name, value)`.
    #[serde(skip_serializing)]
    pub secret: Option<(String, String)>,
}

impl Default for SidecarConfig {
    fn default() -> Self {
        SidecarConfig {
            base_url: "http://127.0.0.1:8100".into(),
            timeout_secs: 120,
            concurrency: 4,
            retry_base_ms: 1000,
            secret: None,
        }
    }
}

/// Client for the scoring sidecar: `GET /health`, `POST /embed`, `POST /score`.
pub struct SidecarClient {
    base: String,
    secret: Option<(String, String)>,
    agent: ureq::Agent,
    retry: RetryPolicy,
    limit: Semaphore,
}

fn unavailable(e: SendError) -> ProviderError {
    match e {
        SendError::Transient(m) => ProviderError::ScorerUnavailable(m),
        SendError::Rejected { status, message } => ProviderError::BadRequest { status, message },
        SendError::Malformed(m) => ProviderError::MalformedResponse(m),
    }
}

impl SidecarClient {
    pub fn new(config: &SidecarConfig) -> Self {
        SidecarClient {
            base: config.base_url.trim_end_matches('/').to_string(),
            secret: config.secret.clone(),
            agent: agent(Duration::from_secs(config.timeout_secs)),
            retry: RetryPolicy {
                attempts: 3,
                base_delay: Duration::from_millis(config.retry_base_ms),
            },
            limit: Semaphore::new(config.concurrency),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn call(&self, path: &str, body: Option<serde_json::Value>) -> Result<serde_json::Value, ProviderError> {
        let url = format!("{}{path}", self.base);
        let _permit = self.limit.acquire();
        let (_, out) = self.retry.run(|| {
            let result = match &body {
                None => {
                    let mut req = self.agent.get(&url);
                    if let Some((k, v)) = &self.secret {
                        req = req.header(k, v);
                    }
                    req.call()
                }
                Some(b) => {
                    let mut req = self.agent.post(&url);
                    if let Some((k, v)) = &self.secret {
                        req = req.header(k, v);
                    }
                    req.send_json(b)
                }
            };
            read_response(result)
        });
        out.map_err(unavailable)
    }

    /// One attempt only: used to decide whether sidecar metrics are computed.
    pub fn health(&self) -> Result<Health, ProviderError> {
        let url = format!("{}/health", self.base);
        let mut req = self.agent.get(&url);
        if let Some((k, v)) = &self.secret {
            req = req.header(k, v);
        }
        let v = read_response(req.call()).map_err(unavailable)?;
        serde_json::from_value(v).map_err(|e| ProviderError::MalformedResponse(e.to_string()))
    }

    pub fn embed(&self, req: &ScorerRequest) -> Result<Vec<Vec<f64>>, ProviderError> {
        if !req.kind.is_embedding() {
            return Err(ProviderError::InvalidRequest(format!("{} is not an embedding kind", req.kind.as_str())));
        }
        req.validate()?;
        if req.texts.is_empty() {
            return Ok(Vec::new());
        }
        let v = self.call("/embed", Some(req.wire_body()))?;
        let vectors: Vec<Vec<f64>> = serde_json::from_value(v.get("vectors").cloned().unwrap_or_default())
            .map_err(|e| ProviderError::MalformedResponse(format!("vectors: {e}")))?;
        if vectors.len() != req.len() {
            return Err(ProviderError::MalformedResponse(format!(
                "expected {} vectors, got {}",
                req.len(),
                vectors.len()
            )));
        }
        Ok(vectors)
    }

    pub fn score(&self, req: &ScorerRequest) -> Result<Vec<f64>, ProviderError> {
        if req.kind.is_embedding() {
            return Err(ProviderError::InvalidRequest(format!("{} is not a score kind", req.kind.as_str())));
        }
        req.validate()?;
        if req.len() == 0 {
            return Ok(Vec::new());
        }
        let v = self.call("/score", Some(req.wire_body()))?;
        let scores: Vec<f64> = serde_json::from_value(v.get("scores").cloned().unwrap_or_default())
            .map_err(|e| ProviderError::MalformedResponse(format!("scores: {e}")))?;
        if scores.len() != req.len() {
            return Err(ProviderError::MalformedResponse(format!(
                "expected {} scores, got {}",
                req.len(),
                scores.len()
            )));
        }
        if let Some(bad) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(ProviderError::MalformedResponse(format!("score {bad} outside [0, 1]")));
        }
        Ok(scores)
    }
}
