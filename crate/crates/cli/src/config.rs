use std::path::{Path, PathBuf};

use regstyle::biber::{DimensionRule, MdaFitConfig, Rotation};
use regstyle::datasets::Variant;
use regstyle::pipeline::System;
use regstyle::providers::{EndpointConfig, SidecarConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub plan: Option<PathBuf>,
    pub run_dir: Option<PathBuf>,
    pub mda_model: Option<PathBuf>,
    /// Defaults to `<run_dir>/cache`.
    pub cache_dir: Option<PathBuf>,
    /// Feature catalog JSON; the builtin catalog when unset.
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MdaOptions {
    /// Fixed number of dimensions. Ignored when `variance_threshold` is set.
    pub dimensions: usize,
    pub variance_threshold: Option<f64>,
    pub rotation: Rotation,
}

impl Default for MdaOptions {
    fn default() -> Self {
        MdaOptions {
            dimensions: 6,
            variance_threshold: None,
            rotation: Rotation::None,
        }
    }
}

impl MdaOptions {
    pub fn fit_config(&self) -> MdaFitConfig {
        MdaFitConfig {
            dimensions: match self.variance_threshold {
                Some(t) => DimensionRule::VarianceThreshold(t),
                None => DimensionRule::Fixed(self.dimensions),
            },
            rotation: self.rotation,
        }
    }
}

/// Everything a command needs, loadable from one JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub variant: Option<Variant>,
    pub systems: Vec<System>,
    pub seed: u64,
    pub k: usize,
    pub authors_per_side: usize,
    pub endpoint: EndpointConfig,
    /// Scoring sidecar; neural metrics are skipped without one.
    pub sidecar: Option<SidecarConfig>,
    pub paths: Paths,
    pub mda: MdaOptions,
    pub threads: usize,
    pub max_cases: Option<usize>,
    pub top_k: usize,
    pub x_column: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            variant: None,
            systems: System::ALL.to_vec(),
            seed: 0,
            k: regstyle::datasets::gyafc::DEFAULT_K,
            authors_per_side: regstyle::datasets::mud::AUTHORS_PER_SIDE,
            endpoint: EndpointConfig::default(),
            sidecar: None,
            paths: Paths::default(),
            mda: MdaOptions::default(),
            threads: 4,
            max_cases: None,
            top_k: regstyle::analysis::DEFAULT_TOP_K,
            x_column: regstyle::analysis::DEFAULT_X_COLUMN.into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.systems.is_empty() {
            return Err(CliError::Usage("no systems selected".into()));
        }
        if self.threads == 0 || self.endpoint.concurrency == 0 {
            return Err(CliError::Usage("threads and concurrency must be positive".into()));
        }
        if self.k == 0 || self.authors_per_side == 0 {
            return Err(CliError::Usage("k and authors_per_side must be positive".into()));
        }
        if let Some(t) = self.mda.variance_threshold {
            if !(t > 0.0 && t <= 1.0) {
                return Err(CliError::Usage(format!("variance threshold {t} is outside (0, 1]")));
            }
        }
        if !regstyle::metrics::ScoreVector::COLUMNS.contains(&self.x_column.as_str()) {
            return Err(CliError::Usage(format!("unknown metric column {:?}", self.x_column)));
        }
        Ok(())
    }

    pub fn variant(&self) -> Result<Variant, CliError> {
        self.variant.ok_or_else(|| CliError::Usage("a variant is required (--variant)".into()))
    }

    pub fn require<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
        value.as_deref().ok_or_else(|| CliError::Usage(format!("{flag} is required")))
    }
}
