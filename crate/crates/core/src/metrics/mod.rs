//! Surface metrics: readability, n-gram overlap, edit quality and alignment.
//!
//! All overlap metrics compare lowercased word and number tokens
//! ([`Document::terms`](crate::Document::terms)); punctuation is ignored.

mod bleu;
mod formality;
mod meteor;
mod readability;
mod rouge;
mod sari;
mod score;

use thiserror::Error;

pub use bleu::bleu;
pub use formality::{formality_accuracy, Formality};
pub use meteor::{meteor, meteor_alignment, MeteorAlignment, METEOR_ALPHA, METEOR_BETA, METEOR_GAMMA};
pub use readability::{ari, fkgl};
pub use rouge::{overlap_rouge, rouge_l, rouge_n};
pub use sari::sari;
pub use score::ScoreVector;

pub use crate::biber::away_towards;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("document has no words or no sentences")]
    EmptyDocument,
    #[error("at least one reference is required")]
    NoReferences,
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

pub(crate) fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}
