use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::chat::ChatRequest;
use super::ProviderError;

#[derive(Serialize)]
struct KeyMaterial<'a> {
    endpoint: &'a str,
    request: &'a ChatRequest,
}

/// Hex SHA-256 of the canonical JSON of endpoint plus full request
/// (model, messages, decoding parameters).
pub fn cache_key(endpoint: &str, req: &ChatRequest) -> String {
    let json = serde_json::to_vec(&KeyMaterial { endpoint, request: req }).expect("request serializes");
    hex::encode(Sha256::digest(json))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    response: String,
}

/// Completion cache, in memory and optionally persisted one file per key.
///
/// [`ResponseCache::slot`] hands out a per-key lock so concurrent identical
/// requests wait for the first one instead of each hitting the network.
#[derive(Debug, Default)]
pub struct ResponseCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, String>>,
    slots: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl ResponseCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> Result<Self, ProviderError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| ProviderError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(ResponseCache {
            dir: Some(dir),
            ..Self::default()
        })
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn slot(&self, key: &str) -> Arc<Mutex<()>> {
        self.slots.lock().unwrap().entry(key.to_string()).or_default().clone()
    }

    pub fn get(&self, key: &str) -> Option<String> {
        if let Some(hit) = self.memory.lock().unwrap().get(key) {
            return Some(hit.clone());
        }
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == key).then(|| {
            self.memory.lock().unwrap().insert(entry.key, entry.response.clone());
            entry.response
        })
    }

    pub fn put(&self, key: &str, response: &str) -> Result<(), ProviderError> {
        self.memory.lock().unwrap().insert(key.to_string(), response.to_string());
        let Some(path) = self.path(key) else {
            return Ok(());
        };
        let entry = Entry {
            key: key.to_string(),
            response: response.to_string(),
        };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let write = || -> std::io::Result<()> {
            fs::write(&tmp, serde_json::to_vec(&entry)?)?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| ProviderError::Cache(format!("{}: {e}", path.display())))
    }
}
