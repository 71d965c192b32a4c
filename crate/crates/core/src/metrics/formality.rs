use serde::{Deserialize, Serialize};

use super::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formality {
    Formal,
    Informal,
}

impl Formality {
    pub fn opposite(self) -> Self {
        match self {
            Formality::Formal => Formality::Informal,
            Formality::Informal => Formality::Formal,
        }
    }
}

/// Whether a classifier's probability of "formal" agrees with `desired`.
///
/// The 0.5 threshold counts as formal.
pub fn formality_accuracy(prob: f64, desired: Formality) -> Result<bool, MetricError> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(MetricError::InvalidProbability(prob));
    }
    Ok((prob >= 0.5) == (desired == Formality::Formal))
}
