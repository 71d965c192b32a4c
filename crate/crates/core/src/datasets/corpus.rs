use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::metrics::Formality;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MudRecord {
    pub author_id: String,
    pub text: String,
    pub subreddit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GyafcRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub text: String,
    pub domain: String,
    pub formality: Formality,
    pub split: String,
    /// Reference rewrites in the opposite formality (test records).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochraneRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub abstract_text: String,
    pub pls: String,
    pub split: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    Mud,
    Gyafc,
    Cochrane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corpus {
    Mud(Vec<MudRecord>),
    Gyafc(Vec<GyafcRecord>),
    Cochrane(Vec<CochraneRecord>),
}

impl Corpus {
    pub fn len(&self) -> usize {
        match self {
            Corpus::Mud(r) => r.len(),
            Corpus::Gyafc(r) => r.len(),
            Corpus::Cochrane(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// Cochrane files name the field `abstract`, a Rust keyword.
#[derive(Deserialize)]
struct CochraneWire {
    #[serde(default)]
    id: Option<String>,
    #[serde(rename = "abstract")]
    abstract_text: String,
    pls: String,
    split: String,
}

fn parse_lines<T: DeserializeOwned>(text: &str, check: impl Fn(&T) -> Result<(), String>) -> Result<Vec<T>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let violation = |message: String| DatasetError::SchemaViolation { line: i + 1, message };
        let rec: T = serde_json::from_str(line).map_err(|e| violation(e.to_string()))?;
        check(&rec).map_err(violation)?;
        out.push(rec);
    }
    Ok(out)
}

fn nonempty(field: &str, value: &str) -> Result<(), String> {
    if value.trim().is_empty() {
        Err(format!("empty {field}"))
    } else {
        Ok(())
    }
}

/// Parses newline-delimited JSON already in memory. Line numbers in errors
/// are 1-based; blank lines are skipped.
pub fn parse_corpus(text: &str, schema: Schema) -> Result<Corpus, DatasetError> {
    Ok(match schema {
        Schema::Mud => Corpus::Mud(parse_lines(text, |r: &MudRecord| {
            nonempty("author_id", &r.author_id)?;
            nonempty("text", &r.text)
        })?),
        Schema::Gyafc => Corpus::Gyafc(parse_lines(text, |r: &GyafcRecord| {
            nonempty("text", &r.text)?;
            nonempty("domain", &r.domain)
        })?),
        Schema::Cochrane => {
            let wire = parse_lines(text, |r: &CochraneWire| {
                nonempty("abstract", &r.abstract_text)?;
                nonempty("pls", &r.pls)
            })?;
            Corpus::Cochrane(
                wire.into_iter()
                    .map(|w| CochraneRecord {
                        id: w.id,
                        abstract_text: w.abstract_text,
                        pls: w.pls,
                        split: w.split,
                    })
                    .collect(),
            )
        }
    })
}

pub fn load_corpus(path: &Path, schema: Schema) -> Result<Corpus, DatasetError> {
    let text = fs::read_to_string(path).map_err(|e| DatasetError::IoFailure {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_corpus(&text, schema)
}
