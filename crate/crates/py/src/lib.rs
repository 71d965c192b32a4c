use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use regstyle::analysis::{frontier_indices, SystemPoint};
use regstyle::biber::{self, DimensionRule, FeatureCatalog, MdaFitConfig, Rotation};
use regstyle::datasets::{self, PlanOptions, Schema, Variant};
use regstyle::metrics;
use regstyle::pipeline::{templates, System, Task};
use regstyle::textproc::{self, TokenKind};
use regstyle::Document;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kind_name(k: TokenKind) -> &'static str {
    match k {
        TokenKind::Word => "word",
        TokenKind::Punctuation => "punctuation",
        TokenKind::Number => "number",
        TokenKind::Symbol => "symbol",
    }
}

/// Tokens of `text` as `(surface, kind)` pairs.
#[pyfunction]
fn tokenize(text: &str) -> Vec<(String, &'static str)> {
    textproc::tokenize(text).into_iter().map(|t| (t.surface, kind_name(t.kind))).collect()
}

#[pyfunction]
fn count_syllables(word: &str) -> usize {
    textproc::count_syllables(word)
}

#[pyfunction]
fn stem(word: &str) -> String {
    textproc::stem(word)
}

/// Sentences of `text`, each as its token surfaces.
#[pyfunction]
fn sentences(text: &str) -> Vec<Vec<String>> {
    let doc = Document::new(text);
    doc.sentences()
        .iter()
        .map(|s| doc.tokens()[s.start..s.end].iter().map(|t| t.surface.clone()).collect())
        .collect()
}

#[pyfunction]
fn fkgl(text: &str) -> PyResult<f64> {
    metrics::fkgl(&Document::new(text)).map_err(value_err)
}

#[pyfunction]
fn ari(text: &str) -> PyResult<f64> {
    metrics::ari(&Document::new(text)).map_err(value_err)
}

fn docs(texts: Vec<String>) -> Vec<Document> {
    texts.into_iter().map(Document::new).collect()
}

#[pyfunction]
fn bleu(candidate: &str, references: Vec<String>) -> PyResult<f64> {
    metrics::bleu(&Document::new(candidate), &docs(references)).map_err(value_err)
}

/// `(rouge1, rouge2, rougeL)` F-measures.
#[pyfunction]
fn rouge(candidate: &str, reference: &str) -> (f64, f64, f64) {
    metrics::overlap_rouge(&Document::new(candidate), &Document::new(reference))
}

#[pyfunction]
fn sari(source: &str, candidate: &str, references: Vec<String>) -> PyResult<f64> {
    metrics::sari(&Document::new(source), &Document::new(candidate), &docs(references)).map_err(value_err)
}

#[pyfunction]
fn meteor(candidate: &str, reference: &str) -> f64 {
    metrics::meteor(&Document::new(candidate), &Document::new(reference))
}

/// `(away, towards)` for three vectors in the same embedding space.
#[pyfunction]
fn away_towards(rewritten: Vec<f64>, input: Vec<f64>, target: Vec<f64>) -> PyResult<(f64, f64)> {
    biber::away_towards(&rewritten, &input, &target).map_err(value_err)
}

#[pyfunction]
fn feature_names() -> Vec<String> {
    FeatureCatalog::builtin().features.into_iter().map(|f| f.name).collect()
}

/// Builtin-catalog feature rates for `text`.
#[pyfunction]
fn extract_features(text: &str) -> PyResult<Vec<f64>> {
    biber::extract_features(&Document::new(text), &FeatureCatalog::builtin())
        .map(|fv| fv.rates)
        .map_err(value_err)
}

/// Names of the non-dominated points among `(name, x, y)`, both axes maximized.
#[pyfunction]
fn pareto_frontier(points: Vec<(String, f64, f64)>) -> Vec<String> {
    let pts: Vec<SystemPoint> = points.into_iter().map(|(s, x, y)| SystemPoint::new(s, x, y, 0)).collect();
    frontier_indices(&pts).into_iter().map(|i| pts[i].system.clone()).collect()
}

/// Renders step `step` (1-based) of a system's prompt chain.
#[pyfunction]
fn render_prompt(system: &str, step: usize, bindings: BTreeMap<String, String>) -> PyResult<String> {
    let system: System = system.parse().map_err(PyValueError::new_err)?;
    let t = step
        .checked_sub(1)
        .and_then(|i| templates(system).get(i))
        .ok_or_else(|| PyValueError::new_err(format!("{system} has no step {step}")))?;
    let b: BTreeMap<&str, &str> = bindings.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    t.render(&b).map_err(value_err)
}

/// Builds an evaluation plan from a JSONL corpus; returns `(plan_json, digest)`.
#[pyfunction]
#[pyo3(signature = (corpus_path, variant, seed=0, k=16, authors_per_side=15))]
fn build_plan(corpus_path: PathBuf, variant: &str, seed: u64, k: usize, authors_per_side: usize) -> PyResult<(String, String)> {
    let variant: Variant = variant.parse().map_err(PyValueError::new_err)?;
    let schema = match variant.task() {
        Task::Mud => Schema::Mud,
        Task::Gyafc => Schema::Gyafc,
        Task::Cochrane => Schema::Cochrane,
    };
    let corpus = datasets::load_corpus(&corpus_path, schema).map_err(value_err)?;
    let opts = PlanOptions {
        count: authors_per_side,
        k,
        ..PlanOptions::new(variant, seed)
    };
    let plan = datasets::build_plan(&corpus, opts).map_err(value_err)?;
    let json = String::from_utf8(plan.to_bytes()).map_err(value_err)?;
    Ok((json, plan.digest()))
}

/// Register model fitted on raw texts with the builtin catalog.
#[pyclass(module = "regstyle_py")]
struct MdaModel {
    inner: biber::MdaModel,
}

#[pymethods]
impl MdaModel {
    #[staticmethod]
    #[pyo3(signature = (texts, dimensions=6, varimax=false))]
    fn fit(texts: Vec<String>, dimensions: usize, varimax: bool) -> PyResult<Self> {
        let catalog = FeatureCatalog::builtin();
        let vectors: Vec<_> = texts
            .iter()
            .filter_map(|t| biber::extract_features(&Document::new(t.as_str()), &catalog).ok())
            .collect();
        let config = MdaFitConfig {
            dimensions: DimensionRule::Fixed(dimensions),
            rotation: if varimax { Rotation::Varimax } else { Rotation::None },
        };
        let inner = biber::fit_mda(&vectors, &catalog, &config).map_err(value_err)?;
        Ok(MdaModel { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let inner = biber::MdaModel::load(&path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Ok(MdaModel { inner })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(&path).map_err(|e| PyIOError::new_err(e.to_string()))
    }

    fn project(&self, text: &str) -> PyResult<Vec<f64>> {
        biber::embed_text(text, &FeatureCatalog::builtin(), &self.inner)
            .map(|e| e.scores)
            .map_err(value_err)
    }

    #[getter]
    fn dimensions(&self) -> usize {
        self.inner.dimensions
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues.clone()
    }

    #[getter]
    fn explained_variance(&self) -> Vec<f64> {
        self.inner.explained_variance.clone()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

#[pymodule]
fn regstyle_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(count_syllables, m)?)?;
    m.add_function(wrap_pyfunction!(stem, m)?)?;
    m.add_function(wrap_pyfunction!(sentences, m)?)?;
    m.add_function(wrap_pyfunction!(fkgl, m)?)?;
    m.add_function(wrap_pyfunction!(ari, m)?)?;
    m.add_function(wrap_pyfunction!(bleu, m)?)?;
    m.add_function(wrap_pyfunction!(rouge, m)?)?;
    m.add_function(wrap_pyfunction!(sari, m)?)?;
    m.add_function(wrap_pyfunction!(meteor, m)?)?;
    m.add_function(wrap_pyfunction!(away_towards, m)?)?;
    m.add_function(wrap_pyfunction!(feature_names, m)?)?;
    m.add_function(wrap_pyfunction!(extract_features, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_frontier, m)?)?;
    m.add_function(wrap_pyfunction!(render_prompt, m)?)?;
    m.add_function(wrap_pyfunction!(build_plan, m)?)?;
    m.add_class::<MdaModel>()?;
    Ok(())
}
