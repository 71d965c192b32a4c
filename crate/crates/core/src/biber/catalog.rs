use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BiberError;

/// The catalog shipped with the crate.
pub const DEFAULT_CATALOG: &str = include_str!("../../data/register_catalog_v1.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Occurrences per 1000 word tokens.
    #[serde(rename = "per_1000_words")]
    Per1000Words,
    /// Occurrences per 1000 tokens of any kind.
    #[serde(rename = "per_1000_tokens")]
    Per1000Tokens,
    /// Statistic reported as-is (ratios, mean lengths).
    Raw,
}

/// One slot of a bigram template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Any,
    Lexicon(Vec<String>),
    Suffix(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenClass {
    Number,
    Capitalized,
    LongWord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Matcher {
    Lexicon {
        words: Vec<String>,
    },
    Suffix {
        suffixes: Vec<String>,
        #[serde(default = "default_min_stem")]
        min_stem: usize,
    },
    Bigram {
        first: Slot,
        second: Slot,
    },
    Punctuation {
        chars: Vec<String>,
    },
    TypeTokenRatio {
        window: usize,
    },
    MeanWordLength,
    TokenClass {
        class: TokenClass,
        #[serde(default)]
        min_len: usize,
    },
}

fn default_min_stem() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRule {
    pub name: String,
    pub matcher: Matcher,
    pub normalization: Normalization,
}

/// An ordered, versioned list of feature rules.
///
/// Feature vectors are only comparable when produced by the same catalog
/// version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCatalog {
    pub version: String,
    pub features: Vec<FeatureRule>,
}

impl FeatureCatalog {
    pub fn builtin() -> Self {
        Self::from_json(DEFAULT_CATALOG).expect("shipped catalog is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, BiberError> {
        let catalog: FeatureCatalog =
            serde_json::from_str(text).map_err(|e| BiberError::InvalidCatalog(e.to_string()))?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn load(path: &Path) -> Result<Self, BiberError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BiberError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    fn validate(&self) -> Result<(), BiberError> {
        let mut seen = HashSet::new();
        for rule in &self.features {
            if !seen.insert(rule.name.as_str()) {
                return Err(BiberError::InvalidCatalog(format!(
                    "duplicate feature name {:?}",
                    rule.name
                )));
            }
            let mut lexicons: Vec<&Vec<String>> = Vec::new();
            match &rule.matcher {
                Matcher::Lexicon { words } => lexicons.push(words),
                Matcher::Bigram { first, second } => {
                    for slot in [first, second] {
                        if let Slot::Lexicon(words) = slot {
                            lexicons.push(words);
                        }
                    }
                }
                _ => {}
            }
            if let Some(bad) = lexicons
                .iter()
                .flat_map(|l| l.iter())
                .find(|w| w.to_lowercase() != **w)
            {
                return Err(BiberError::InvalidCatalog(format!(
                    "lexicon entry {bad:?} in {} is not lowercase",
                    rule.name
                )));
            }
        }
        Ok(())
    }
}
