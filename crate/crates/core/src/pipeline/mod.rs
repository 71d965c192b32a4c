//! Prompt templates, the prompting systems and baselines, and the run store.

mod batch;
mod case;
mod parse;
mod runner;
mod store;
mod templates;

use thiserror::Error;

pub use batch::{run_batch, BatchOptions, BatchSummary, Scorer};
pub use case::{CaseMeta, System, Task, TransferCase};
pub use parse::{is_suspect, parse_descriptors, trim_response};
pub use runner::{run_naive, Pipeline, PipelineRun, StepOutput};
pub use store::{write_atomic, RunRecord, RunStore};
pub use templates::{render_prompt, templates, PromptTemplate, PLACEHOLDERS, RG, RG_CONTRASTIVE, SIMPLE, STYLL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("placeholder {{{0}}} has no binding")]
    MissingBinding(String),
    #[error("case {0} has no gold references")]
    NoGoldReference(String),
    #[error("{0} is not a naive baseline")]
    NotNaive(System),
    #[error("run store: {0}")]
    Store(String),
}
