//! Corpus ingestion and reproducible construction of evaluation cases.

pub mod cochrane;
pub mod corpus;
pub mod gyafc;
pub mod mud;
pub mod plan;
pub mod rng;

use thiserror::Error;

pub use cochrane::build_cochrane_cases;
pub use corpus::{load_corpus, parse_corpus, CochraneRecord, Corpus, GyafcRecord, MudRecord, Schema};
pub use gyafc::build_gyafc_cases;
pub use mud::{build_mud_cases, select_mud_authors, AuthorCorpus, MudSelection};
pub use plan::{PairingPlan, Selections, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    SchemaViolation { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    IoFailure { path: String, message: String },
    #[error("{variant}: {found} eligible {side} authors, {needed} needed")]
    InsufficientAuthors {
        variant: Variant,
        side: &'static str,
        found: usize,
        needed: usize,
    },
    #[error("target pool has {found} texts, {needed} needed")]
    InsufficientPool { needed: usize, found: usize },
    #[error("case {0}: exemplar equals a gold reference")]
    GoldExposure(String),
    #[error("variant {0} does not apply here")]
    WrongVariant(Variant),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
}

/// Options for [`build_plan`]. `count` is the number of authors per side
/// (MUD) and `k` the number of concatenated pool texts (GYAFC).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub variant: Variant,
    pub seed: u64,
    pub count: usize,
    pub k: usize,
}

impl PlanOptions {
    pub fn new(variant: Variant, seed: u64) -> Self {
        PlanOptions {
            variant,
            seed,
            count: mud::AUTHORS_PER_SIDE,
            k: gyafc::DEFAULT_K,
        }
    }
}

/// Builds the plan for whichever task the corpus belongs to.
pub fn build_plan(corpus: &Corpus, opts: PlanOptions) -> Result<PairingPlan, DatasetError> {
    match corpus {
        Corpus::Mud(recs) => {
            let sel = select_mud_authors(recs, opts.variant, opts.seed, opts.count)?;
            Ok(build_mud_cases(&sel, opts.variant, opts.seed))
        }
        Corpus::Gyafc(recs) => build_gyafc_cases(recs, opts.variant, opts.k, opts.seed),
        Corpus::Cochrane(recs) => {
            if opts.variant != Variant::Cochrane {
                return Err(DatasetError::WrongVariant(opts.variant));
            }
            build_cochrane_cases(recs, opts.seed)
        }
    }
}
