use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metrics::Formality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Mud,
    Gyafc,
    Cochrane,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Mud => "mud",
            Task::Gyafc => "gyafc",
            Task::Cochrane => "cochrane",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mud" => Ok(Task::Mud),
            "gyafc" => Ok(Task::Gyafc),
            "cochrane" => Ok(Task::Cochrane),
            _ => Err(format!("unknown task {s:?} (expected mud, gyafc or cochrane)")),
        }
    }
}

/// Provenance of a case. Fields that do not apply to a task stay `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_author: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_author: Option<String>,
    /// Formality the rewrite should have (GYAFC).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_formality: Option<Formality>,
}

/// An input text, the exemplar whose style it should take on, and optional
/// gold rewrites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferCase {
    pub id: String,
    pub task: Task,
    pub input_text: String,
    pub style_exemplar: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_refs: Option<Vec<String>>,
    #[serde(default)]
    pub meta: CaseMeta,
}

impl TransferCase {
    /// Checks the nonempty-text and gold-by-task rules.
    pub fn validate(&self) -> Result<(), String> {
        if self.input_text.trim().is_empty() {
            return Err(format!("case {}: empty input text", self.id));
        }
        if self.style_exemplar.trim().is_empty() {
            return Err(format!("case {}: empty style exemplar", self.id));
        }
        if self.task == Task::Mud && self.gold_refs.is_some() {
            return Err(format!("case {}: mud cases carry no gold references", self.id));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum System {
    Copy,
    Target,
    Gold,
    Simple,
    Styll,
    Rg,
    RgContrastive,
}

impl System {
    pub const ALL: [System; 7] = [
        System::Copy,
        System::Target,
        System::Gold,
        System::Simple,
        System::Styll,
        System::Rg,
        System::RgContrastive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            System::Copy => "copy",
            System::Target => "target",
            System::Gold => "gold",
            System::Simple => "simple",
            System::Styll => "styll",
            System::Rg => "rg",
            System::RgContrastive => "rg_contrastive",
        }
    }

    /// Chat calls made by a complete run.
    pub fn step_count(self) -> usize {
        match self {
            System::Copy | System::Target | System::Gold => 0,
            System::Simple => 1,
            System::Styll | System::Rg | System::RgContrastive => 3,
        }
    }

    pub fn produces_descriptors(self) -> bool {
        self.step_count() == 3
    }

    pub fn is_naive(self) -> bool {
        self.step_count() == 0
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for System {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        System::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = System::ALL.iter().map(|x| x.as_str()).collect();
                format!("unknown system {s:?} (expected one of {})", names.join(", "))
            })
    }
}
