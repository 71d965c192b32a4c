//! Register features and the multidimensional-analysis (MDA) embedding.
//!
//! Texts are tagged with a fixed, versioned catalog of rule-based features,
//! standardized against a training corpus, and projected onto the leading
//! principal dimensions of the feature correlation matrix.

mod catalog;
mod distance;
mod features;
pub mod linalg;
mod mda;

use thiserror::Error;

pub use catalog::{FeatureCatalog, FeatureRule, Matcher, Normalization, Slot, TokenClass, DEFAULT_CATALOG};
pub use distance::{away_towards, cosine};
pub use features::{extract_features, FeatureVector};
pub use mda::{
    fit_mda, project, DimensionRule, MdaEmbedding, MdaFitConfig, MdaModel, Rotation, MODEL_FORMAT,
    MODEL_FORMAT_VERSION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BiberError {
    #[error("document has no word tokens")]
    EmptyDocument,
    #[error("need at least 2 feature vectors to fit, got {found}")]
    InsufficientCorpus { found: usize },
    #[error("every feature has zero variance across the corpus")]
    DegenerateCorpus,
    #[error("catalog version mismatch: model uses {expected:?}, vector has {found:?}")]
    CatalogMismatch { expected: String, found: String },
    #[error("vector length {found} does not match expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cosine is undefined for a zero vector")]
    ZeroVector,
    #[error("invalid feature catalog: {0}")]
    InvalidCatalog(String),
    #[error("invalid MDA model file: {0}")]
    InvalidModel(String),
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

use crate::textproc::Document;

/// Tags and projects a raw text in one call.
pub fn embed_text(text: &str, catalog: &FeatureCatalog, model: &MdaModel) -> Result<MdaEmbedding, BiberError> {
    let fv = extract_features(&Document::new(text), catalog)?;
    model.project(&fv)
}
