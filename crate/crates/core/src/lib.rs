//! Example-based style transfer with register-analysis prompting.
//!
//! The crate is organised around the stages of an evaluation run:
//!
//! * [`textproc`] tokenization, sentence segmentation, syllables, stemming, n-grams
//! * [`biber`] rule-based register features and the multidimensional-analysis embedding
//! * [`metrics`] readability, overlap and edit metrics plus Away/Towards distances
//! * [`providers`] chat-completions and scoring-sidecar clients with caching and retry
//! * [`pipeline`] prompt templates, the prompting systems and the run store
//! * [`datasets`] corpus ingestion and reproducible case construction
//! * [`analysis`] Pareto frontiers, descriptor statistics and report emission
//! * [`scoring`] assembles a [`metrics::ScoreVector`] for a finished run
//! * [`mock`] a scripted local HTTP server speaking both wire protocols

pub mod analysis;
pub mod biber;
pub mod datasets;
pub mod metrics;
pub mod mock;
pub mod pipeline;
pub mod providers;
pub mod scoring;
pub mod textproc;

pub use textproc::{Document, Token, TokenKind};
