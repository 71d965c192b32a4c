//! Scripted local HTTP server for tests and offline runs.
//!
//! Serves `POST /v1/chat/completions` (echo or scripted replies) and,
//! optionally, the sidecar routes `GET /health`, `POST /embed`, `POST /score`
//! backed by deterministic hashed bag-of-words embeddings and heuristic scores.
//! Every response closes the connection.

use std::collections::HashMap;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::providers::ScorerKind;
use crate::textproc::tokenize;

/// Reply with `response` when the last user message contains `contains`.
/// `{prompt}` inside the response expands to that message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptRule {
    pub contains: String,
    pub response: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MockConfig {
    /// First matching rule wins; without a match the prompt is echoed.
    pub rules: Vec<ScriptRule>,
    /// The first `fail_first` chat requests get HTTP 500.
    pub fail_first: usize,
    pub delay_ms: u64,
    pub sidecar: bool,
    pub kinds: Vec<ScorerKind>,
    pub embed_dim: usize,
}

impl Default for MockConfig {
    fn default() -> Self {
        MockConfig {
            rules: Vec::new(),
            fail_first: 0,
            delay_ms: 0,
            sidecar: true,
            kinds: ScorerKind::ALL.to_vec(),
            embed_dim: 64,
        }
    }
}

#[derive(Default)]
struct State {
    hits: Mutex<HashMap<String, usize>>,
    chat_seen: AtomicUsize,
    last_chat: Mutex<Option<Value>>,
}

pub struct MockServer {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    state: Arc<State>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    /// Binds an ephemeral localhost port.
    pub fn start(config: MockConfig) -> io::Result<Self> {
        Self::bind("127.0.0.1:0", config)
    }

    pub fn bind(addr: &str, config: MockConfig) -> io::Result<Self> {
        let listener = TcpListener::bind(addr)?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let state = Arc::new(State::default());
        let config = Arc::new(config);
        let handle = {
            let (stop, state) = (stop.clone(), state.clone());
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let (config, state) = (config.clone(), state.clone());
                    std::thread::spawn(move || {
                        let _ = serve(stream, &config, &state);
                    });
                }
            })
        };
        Ok(MockServer {
            addr,
            stop,
            state,
            handle: Some(handle),
        })
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Requests received for `path`, including failed ones.
    pub fn hits(&self, path: &str) -> usize {
        self.state.hits.lock().unwrap().get(path).copied().unwrap_or(0)
    }

    pub fn chat_requests(&self) -> usize {
        self.hits("/v1/chat/completions")
    }

    /// Body of the most recent chat request.
    pub fn last_chat_body(&self) -> Option<Value> {
        self.state.last_chat.lock().unwrap().clone()
    }

    /// Blocks until the accept loop ends.
    pub fn wait(mut self) {
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

struct Request {
    method: String,
    path: String,
    body: Vec<u8>,
}

fn read_request(stream: &TcpStream) -> io::Result<Request> {
    let mut reader = BufReader::new(stream);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    let mut parts = line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_string();
    let path = parts.next().unwrap_or_default().to_string();
    let mut length = 0usize;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-length") {
                length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body)?;
    Ok(Request { method, path, body })
}

fn respond(mut stream: &TcpStream, status: u16, body: &Value) -> io::Result<()> {
    let reason = match status {
        200 => "OK",
        400 => "Bad Request",
        404 => "Not Found",
        _ => "Internal Server Error",
    };
    let payload = body.to_string();
    write!(
        stream,
        "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        payload.len()
    )?;
    stream.flush()
}

fn error(msg: &str) -> Value {
    json!({"error": {"message": msg}})
}

fn serve(stream: TcpStream, config: &MockConfig, state: &State) -> io::Result<()> {
    let req = read_request(&stream)?;
    *state.hits.lock().unwrap().entry(req.path.clone()).or_insert(0) += 1;
    if config.delay_ms > 0 {
        std::thread::sleep(Duration::from_millis(config.delay_ms));
    }
    let body: Value = serde_json::from_slice(&req.body).unwrap_or(Value::Null);
    let (status, out) = match (req.method.as_str(), req.path.as_str()) {
        ("POST", "/v1/chat/completions") => chat(config, state, body),
        ("GET", "/health") if config.sidecar => (
            200,
            json!({
                "status": "ok",
                "kinds": config.kinds.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
                "dims": config.kinds.iter().filter(|k| k.is_embedding())
                    .map(|k| (k.as_str(), config.embed_dim)).collect::<HashMap<_, _>>(),
            }),
        ),
        ("POST", "/embed") if config.sidecar => embed_route(config, &body),
        ("POST", "/score") if config.sidecar => score_route(config, &body),
        _ => (404, error("no such route")),
    };
    respond(&stream, status, &out)
}

fn chat(config: &MockConfig, state: &State, body: Value) -> (u16, Value) {
    let n = state.chat_seen.fetch_add(1, Ordering::SeqCst);
    *state.last_chat.lock().unwrap() = Some(body.clone());
    if n < config.fail_first {
        return (500, error("injected failure"));
    }
    let Some(messages) = body.get("messages").and_then(Value::as_array) else {
        return (400, error("messages is required"));
    };
    let Some(prompt) = messages
        .iter()
        .rev()
        .find(|m| m["role"] == "user")
        .and_then(|m| m["content"].as_str())
    else {
        return (400, error("no user message"));
    };
    let content = config
        .rules
        .iter()
        .find(|r| prompt.contains(&r.contains))
        .map_or_else(|| prompt.to_string(), |r| r.response.replace("{prompt}", prompt));
    (
        200,
        json!({
            "id": format!("mock-{n}"),
            "object": "chat.completion",
            "model": body.get("model").cloned().unwrap_or(Value::Null),
            "choices": [{"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}],
        }),
    )
}

fn parse_kind(body: &Value, config: &MockConfig) -> Result<ScorerKind, (u16, Value)> {
    let kind: ScorerKind = serde_json::from_value(body.get("kind").cloned().unwrap_or(Value::Null))
        .map_err(|_| (400, error("unknown kind")))?;
    if !config.kinds.contains(&kind) {
        return Err((400, error("kind not served")));
    }
    Ok(kind)
}

fn texts(body: &Value) -> Option<Vec<String>> {
    serde_json::from_value(body.get("texts")?.clone()).ok()
}

fn embed_route(config: &MockConfig, body: &Value) -> (u16, Value) {
    let kind = match parse_kind(body, config) {
        Ok(k) if k.is_embedding() => k,
        Ok(_) => return (400, error("not an embedding kind")),
        Err(e) => return e,
    };
    let Some(texts) = texts(body) else {
        return (400, error("texts is required"));
    };
    let vectors: Vec<Vec<f64>> = texts.iter().map(|t| hashed_embedding(kind, t, config.embed_dim)).collect();
    (200, json!({ "vectors": vectors }))
}

fn score_route(config: &MockConfig, body: &Value) -> (u16, Value) {
    let kind = match parse_kind(body, config) {
        Ok(k) if !k.is_embedding() => k,
        Ok(_) => return (400, error("not a score kind")),
        Err(e) => return e,
    };
    let scores: Vec<f64> = if kind == ScorerKind::ScoreMis {
        let Some(pairs) = body
            .get("pairs")
            .and_then(|p| serde_json::from_value::<Vec<(String, String)>>(p.clone()).ok())
        else {
            return (400, error("pairs is required"));
        };
        pairs
            .iter()
            .map(|(a, b)| {
                let (x, y) = (
                    hashed_embedding(ScorerKind::EmbedSbert, a, config.embed_dim),
                    hashed_embedding(ScorerKind::EmbedSbert, b, config.embed_dim),
                );
                let cos: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
                ((1.0 + cos) / 2.0).clamp(0.0, 1.0)
            })
            .collect()
    } else {
        let Some(texts) = texts(body) else {
            return (400, error("texts is required"));
        };
        if kind == ScorerKind::ClassifyFormality && texts.iter().any(|t| t.trim().is_empty()) {
            return (400, error("empty text"));
        }
        texts
            .iter()
            .map(|t| match kind {
                ScorerKind::ScoreCola => acceptability(t),
                _ => formality(t),
            })
            .collect()
    };
    (200, json!({ "scores": scores }))
}

/// Unit vector from signed feature hashing of lowercased tokens plus a
/// constant component, so the empty text still has a direction.
pub fn hashed_embedding(kind: ScorerKind, text: &str, dim: usize) -> Vec<f64> {
    let dim = dim.max(2);
    let mut v = vec![0.0; dim];
    v[0] = 0.5;
    for tok in tokenize(text) {
        let h = Sha256::digest(format!("{}\u{0}{}", kind.as_str(), tok.lowercase));
        let bucket = 1 + (u64::from_le_bytes(h[..8].try_into().unwrap()) % (dim as u64 - 1)) as usize;
        v[bucket] += if h[8] & 1 == 0 { 1.0 } else { -1.0 };
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

const INFORMAL_MARKERS: [&str; 12] = ["lol", "u", "ur", "gonna", "wanna", "hey", "yeah", "whats", "omg", "haha", "kinda", "dunno"];

/// Heuristic probability of "formal".
pub fn formality(text: &str) -> f64 {
    let toks = tokenize(text);
    let words: Vec<_> = toks.iter().filter(|t| t.is_word()).collect();
    let mut score = 0.0;
    if text.trim_start().chars().next().is_some_and(char::is_uppercase) {
        score += 1.0;
    }
    if text.trim_end().ends_with('.') {
        score += 1.0;
    }
    for w in &words {
        if INFORMAL_MARKERS.contains(&w.lowercase.as_str()) || w.surface == "i" {
            score -= 1.5;
        }
        if w.lowercase.contains('\'') || w.lowercase.contains('\u{2019}') {
            score -= 0.5;
        }
    }
    score -= 0.75 * toks.iter().filter(|t| t.surface == "!").count() as f64;
    if !words.is_empty() {
        let mean = words.iter().map(|w| w.surface.chars().count()).sum::<usize>() as f64 / words.len() as f64;
        score += (mean - 4.0).clamp(-1.0, 1.5);
    }
    sigmoid(1.5 * score - 1.0)
}

/// Heuristic acceptability: rewards sentence-shaped text.
pub fn acceptability(text: &str) -> f64 {
    let t = text.trim();
    if t.is_empty() {
        return 0.0;
    }
    let mut score: f64 = 0.5;
    if t.chars().next().is_some_and(char::is_uppercase) {
        score += 0.2;
    }
    if t.ends_with(['.', '!', '?']) {
        score += 0.2;
    }
    score.min(1.0)
}
