use std::path::Path;

use serde::{Deserialize, Serialize};

use super::catalog::FeatureCatalog;
use super::features::FeatureVector;
use super::linalg::{fix_signs, matmul, symmetric_eigen, varimax_rotation, Matrix, JACOBI_TOLERANCE};
use super::BiberError;

pub const MODEL_FORMAT: &str = "regstyle-mda-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum DimensionRule {
    /// Keep this many dimensions (capped at the retained feature count).
    Fixed(usize),
    /// Keep the fewest leading dimensions whose cumulative share of total
    /// variance reaches the threshold.
    VarianceThreshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotation {
    #[default]
    None,
    Varimax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MdaFitConfig {
    pub dimensions: DimensionRule,
    pub rotation: Rotation,
}

impl Default for MdaFitConfig {
    fn default() -> Self {
        MdaFitConfig {
            dimensions: DimensionRule::Fixed(6),
            rotation: Rotation::None,
        }
    }
}

/// Fitted register-analysis model.
///
/// `loadings` has one row per retained feature and one column per dimension;
/// its columns are orthonormal. Features with zero variance in the training
/// corpus are listed in `dropped` and skipped at projection time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdaModel {
    pub format: String,
    pub format_version: u32,
    pub catalog_version: String,
    pub feature_names: Vec<String>,
    pub retained: Vec<usize>,
    pub dropped: Vec<String>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub loadings: Vec<Vec<f64>>,
    pub dimensions: usize,
    /// Variance of the training scores on each retained dimension.
    pub explained_variance: Vec<f64>,
    /// Full eigenvalue spectrum of the correlation matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub rotation: Rotation,
    pub n_train: usize,
}

/// Scores of one text on the retained dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdaEmbedding {
    pub scores: Vec<f64>,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Standardizes `corpus`, eigendecomposes its correlation matrix and keeps the
/// leading dimensions.
pub fn fit_mda(
    corpus: &[FeatureVector],
    catalog: &FeatureCatalog,
    config: &MdaFitConfig,
) -> Result<MdaModel, BiberError> {
    if corpus.len() < 2 {
        return Err(BiberError::InsufficientCorpus { found: corpus.len() });
    }
    for fv in corpus {
        check_vector(fv, &catalog.version, catalog.len())?;
    }
    let n = corpus.len();
    let p_all = catalog.len();

    let mut retained = Vec::new();
    let mut dropped = Vec::new();
    let mut mean = Vec::new();
    let mut std = Vec::new();
    for f in 0..p_all {
        let (m, s) = mean_std(corpus.iter().map(|fv| fv.rates[f]), n);
        let scale = m.abs().max(1.0);
        if s > 1e-12 * scale {
            retained.push(f);
            mean.push(m);
            std.push(s);
        } else {
            dropped.push(catalog.features[f].name.clone());
        }
    }
    if retained.is_empty() {
        return Err(BiberError::DegenerateCorpus);
    }
    let p = retained.len();

    let mut z = Matrix::zeros(n, p);
    for (i, fv) in corpus.iter().enumerate() {
        for (j, &f) in retained.iter().enumerate() {
            z[(i, j)] = (fv.rates[f] - mean[j]) / std[j];
        }
    }
    let mut corr = Matrix::zeros(p, p);
    for a in 0..p {
        for b in a..p {
            let r = (0..n).map(|i| z[(i, a)] * z[(i, b)]).sum::<f64>() / (n - 1) as f64;
            corr[(a, b)] = r;
            corr[(b, a)] = r;
        }
    }

    let (eigenvalues, vectors) = symmetric_eigen(&corr, JACOBI_TOLERANCE);
    let d = match config.dimensions {
        DimensionRule::Fixed(d) => {
            if d == 0 {
                return Err(BiberError::InvalidConfig("dimension count must be at least 1".into()));
            }
            d.min(p)
        }
        DimensionRule::VarianceThreshold(t) => {
            if !(t > 0.0 && t <= 1.0) {
                return Err(BiberError::InvalidConfig(format!(
                    "variance threshold {t} outside (0, 1]"
                )));
            }
            let total: f64 = eigenvalues.iter().sum();
            let mut acc = 0.0;
            let mut d = p;
            for (i, ev) in eigenvalues.iter().enumerate() {
                acc += ev;
                if acc / total >= t - 1e-12 {
                    d = i + 1;
                    break;
                }
            }
            d
        }
    };

    let mut weights = Matrix::zeros(p, d);
    for i in 0..p {
        for j in 0..d {
            weights[(i, j)] = vectors[(i, j)];
        }
    }
    fix_signs(&mut weights);
    let mut explained: Vec<f64> = eigenvalues[..d].to_vec();

    if config.rotation == Rotation::Varimax && d > 1 {
        let mut scaled = weights.clone();
        for j in 0..d {
            let s = explained[j].max(0.0).sqrt();
            for i in 0..p {
                scaled[(i, j)] *= s;
            }
        }
        let rot = varimax_rotation(&scaled, 1e-12, 500);
        let rotated = matmul(&weights, &rot);
        // variance of rotated scores: diag(R' L R)
        let variances: Vec<f64> = (0..d)
            .map(|j| (0..d).map(|k| rot[(k, j)] * rot[(k, j)] * explained[k]).sum())
            .collect();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| variances[b].total_cmp(&variances[a]));
        weights = Matrix::zeros(p, d);
        for (dst, &src) in order.iter().enumerate() {
            for i in 0..p {
                weights[(i, dst)] = rotated[(i, src)];
            }
        }
        fix_signs(&mut weights);
        explained = order.iter().map(|&j| variances[j]).collect();
    }

    Ok(MdaModel {
        format: MODEL_FORMAT.into(),
        format_version: MODEL_FORMAT_VERSION,
        catalog_version: catalog.version.clone(),
        feature_names: catalog.features.iter().map(|f| f.name.clone()).collect(),
        retained,
        dropped,
        mean,
        std,
        loadings: weights.to_rows(),
        dimensions: d,
        explained_variance: explained,
        eigenvalues,
        rotation: config.rotation,
        n_train: n,
    })
}

fn check_vector(fv: &FeatureVector, version: &str, len: usize) -> Result<(), BiberError> {
    if fv.catalog_version != version {
        return Err(BiberError::CatalogMismatch {
            expected: version.to_string(),
            found: fv.catalog_version.clone(),
        });
    }
    if fv.rates.len() != len {
        return Err(BiberError::LengthMismatch {
            expected: len,
            found: fv.rates.len(),
        });
    }
    Ok(())
}

impl MdaModel {
    /// Projects a feature vector onto the retained dimensions.
    pub fn project(&self, fv: &FeatureVector) -> Result<MdaEmbedding, BiberError> {
        check_vector(fv, &self.catalog_version, self.feature_names.len())?;
        let mut scores = vec![0.0; self.dimensions];
        for (j, &f) in self.retained.iter().enumerate() {
            let z = (fv.rates[f] - self.mean[j]) / self.std[j];
            for (k, s) in scores.iter_mut().enumerate() {
                *s += self.loadings[j][k] * z;
            }
        }
        Ok(MdaEmbedding { scores })
    }

    /// Share of the total standardized variance captured by each retained dimension.
    pub fn explained_ratio(&self) -> Vec<f64> {
        let total: f64 = self.eigenvalues.iter().sum();
        self.explained_variance.iter().map(|v| v / total).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, BiberError> {
        let model: MdaModel =
            serde_json::from_str(text).map_err(|e| BiberError::InvalidModel(e.to_string()))?;
        if model.format != MODEL_FORMAT || model.format_version != MODEL_FORMAT_VERSION {
            return Err(BiberError::InvalidModel(format!(
                "unsupported format {} v{}",
                model.format, model.format_version
            )));
        }
        let p = model.retained.len();
        let shape_ok = model.mean.len() == p
            && model.std.len() == p
            && model.loadings.len() == p
            && model.loadings.iter().all(|r| r.len() == model.dimensions)
            && model.explained_variance.len() == model.dimensions
            && model.retained.iter().all(|&f| f < model.feature_names.len());
        if !shape_ok {
            return Err(BiberError::InvalidModel("inconsistent array shapes".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), BiberError> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| BiberError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, BiberError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BiberError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

pub fn project(model: &MdaModel, fv: &FeatureVector) -> Result<MdaEmbedding, BiberError> {
    model.project(fv)
}
