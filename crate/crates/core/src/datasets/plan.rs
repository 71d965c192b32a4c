use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::DatasetError;
use crate::pipeline::{Task, TransferCase};

pub const SEPARATOR: &str = "\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Random,
    Single,
    Diverse,
    EmI2f,
    EmF2i,
    FrI2f,
    FrF2i,
    Cochrane,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Variant::Random,
        Variant::Single,
        Variant::Diverse,
        Variant::EmI2f,
        Variant::EmF2i,
        Variant::FrI2f,
        Variant::FrF2i,
        Variant::Cochrane,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Random => "random",
            Variant::Single => "single",
            Variant::Diverse => "diverse",
            Variant::EmI2f => "em_i2f",
            Variant::EmF2i => "em_f2i",
            Variant::FrI2f => "fr_i2f",
            Variant::FrF2i => "fr_f2i",
            Variant::Cochrane => "cochrane",
        }
    }

    pub fn task(self) -> Task {
        match self {
            Variant::Random | Variant::Single | Variant::Diverse => Task::Mud,
            Variant::Cochrane => Task::Cochrane,
            _ => Task::Gyafc,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Variant::ALL.iter().map(|v| v.as_str()).collect();
                format!("unknown variant {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// Which authors a MUD plan drew on each side.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selections {
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subreddit: Option<String>,
}

/// A fully materialized evaluation set. Everything needed to rebuild the
/// exemplars (seed, sizes, separator, chosen authors) travels with the cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingPlan {
    pub task: Task,
    pub variant: Variant,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub separator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selections: Option<Selections>,
    pub cases: Vec<TransferCase>,
}

impl PairingPlan {
    pub fn new(variant: Variant, seed: u64) -> Self {
        PairingPlan {
            task: variant.task(),
            variant,
            seed,
            k: None,
            separator: SEPARATOR.into(),
            selections: None,
            cases: Vec::new(),
        }
    }

    /// Canonical bytes: compact JSON in field order.
    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("plan serializes")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_bytes()))
    }

    /// Truncates to the first `n` cases.
    pub fn truncate(&mut self, n: usize) {
        self.cases.truncate(n);
    }

    /// Rejects any case whose exemplar, or one of its segments, is one of its
    /// own gold references.
    pub fn check_gold_exposure(&self) -> Result<(), DatasetError> {
        for c in &self.cases {
            let exposed = c.gold_refs.iter().flatten().any(|g| {
                *g == c.style_exemplar || c.style_exemplar.split(SEPARATOR).any(|seg| seg == g.trim())
            });
            if exposed {
                return Err(DatasetError::GoldExposure(c.id.clone()));
            }
        }
        Ok(())
    }

    /// Writes the plan and returns its digest.
    pub fn save(&self, path: &Path) -> Result<String, DatasetError> {
        let io = |e: std::io::Error| DatasetError::IoFailure {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io)?;
        }
        fs::write(path, self.to_bytes()).map_err(io)?;
        Ok(self.digest())
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let bytes = fs::read(path).map_err(|e| DatasetError::IoFailure {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let plan: PairingPlan = serde_json::from_slice(&bytes).map_err(|e| DatasetError::SchemaViolation {
            line: e.line(),
            message: e.to_string(),
        })?;
        for c in &plan.cases {
            c.validate().map_err(DatasetError::InvalidPlan)?;
        }
        Ok(plan)
    }
}

/// Sequential zero-padded case ids, wide enough for `total`.
pub(crate) fn case_id(prefix: &str, index: usize, total: usize) -> String {
    let width = total.max(1).to_string().len().max(4);
    format!("{prefix}-{index:0width$}")
}
