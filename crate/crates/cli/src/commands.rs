use std::path::{Path, PathBuf};

use regstyle::analysis::{write_report, ReportOptions};
use regstyle::biber::{extract_features, fit_mda, FeatureCatalog, MdaModel};
use regstyle::datasets::{build_plan, load_corpus, Corpus, PairingPlan, PlanOptions, Schema};
use regstyle::mock::{MockConfig, MockServer};
use regstyle::pipeline::{run_batch, BatchOptions, Pipeline, RunStore, Task};
use regstyle::providers::{ChatClient, ResponseCache, SidecarClient};
use regstyle::scoring::{ScoreContext, Sidecar};
use regstyle::Document;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub fn schema_for(task: Task) -> Schema {
    match task {
        Task::Mud => Schema::Mud,
        Task::Gyafc => Schema::Gyafc,
        Task::Cochrane => Schema::Cochrane,
    }
}

fn digest_path(plan: &Path) -> PathBuf {
    let mut name = plan.as_os_str().to_owned();
    name.push(".sha256");
    PathBuf::from(name)
}

/// Builds the plan for the configured corpus and variant and writes it
/// next to a `.sha256` file holding its digest.
pub fn plan(cfg: &RunConfig) -> Result<Value, CliError> {
    let variant = cfg.variant()?;
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "--corpus")?;
    let plan_path = RunConfig::require(&cfg.paths.plan, "--plan")?;
    let corpus = load_corpus(corpus_path, schema_for(variant.task()))?;
    let opts = PlanOptions {
        variant,
        seed: cfg.seed,
        count: cfg.authors_per_side,
        k: cfg.k,
    };
    let plan = build_plan(&corpus, opts)?;
    let digest = plan.save(plan_path)?;
    std::fs::write(digest_path(plan_path), format!("{digest}\n"))?;
    Ok(json!({
        "plan": plan_path,
        "digest": digest,
        "task": plan.task,
        "variant": plan.variant,
        "cases": plan.cases.len(),
    }))
}

/// Texts a register model is fitted on: every text the corpus holds.
pub fn corpus_texts(corpus: &Corpus) -> Vec<&str> {
    match corpus {
        Corpus::Mud(r) => r.iter().map(|x| x.text.as_str()).collect(),
        Corpus::Gyafc(r) => r.iter().map(|x| x.text.as_str()).collect(),
        Corpus::Cochrane(r) => r.iter().flat_map(|x| [x.abstract_text.as_str(), x.pls.as_str()]).collect(),
    }
}

fn catalog(cfg: &RunConfig) -> Result<FeatureCatalog, CliError> {
    match &cfg.paths.catalog {
        Some(p) => Ok(FeatureCatalog::load(p)?),
        None => Ok(FeatureCatalog::builtin()),
    }
}

pub fn mda_fit(cfg: &RunConfig) -> Result<Value, CliError> {
    let variant = cfg.variant()?;
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "--corpus")?;
    let model_path = RunConfig::require(&cfg.paths.mda_model, "--mda-model")?;
    let catalog = catalog(cfg)?;
    let corpus = load_corpus(corpus_path, schema_for(variant.task()))?;
    let texts = corpus_texts(&corpus);
    let vectors: Vec<_> = texts
        .iter()
        .filter_map(|t| extract_features(&Document::new(*t), &catalog).ok())
        .collect();
    let model = fit_mda(&vectors, &catalog, &cfg.mda.fit_config())?;
    if let Some(dir) = model_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    model.save(model_path)?;
    Ok(json!({
        "model": model_path,
        "n_train": model.n_train,
        "skipped_texts": texts.len() - vectors.len(),
        "dimensions": model.dimensions,
        "explained_variance": model.explained_variance,
        "explained_ratio": model.explained_ratio(),
        "dropped_features": model.dropped,
    }))
}

fn load_plan(cfg: &RunConfig) -> Result<(PairingPlan, String), CliError> {
    let plan_path = RunConfig::require(&cfg.paths.plan, "--plan")?;
    let plan = PairingPlan::load(plan_path)?;
    let digest = plan.digest();
    if let Ok(recorded) = std::fs::read_to_string(digest_path(plan_path)) {
        if recorded.trim() != digest {
            return Err(CliError::Data(format!(
                "plan {} does not match its recorded digest",
                plan_path.display()
            )));
        }
    }
    Ok((plan, digest))
}

/// Pins a run directory to one plan so resumed runs cannot mix plans.
fn pin_plan(run_dir: &Path, digest: &str) -> Result<(), CliError> {
    let pin = run_dir.join("plan.sha256");
    match std::fs::read_to_string(&pin) {
        Ok(existing) if existing.trim() != digest => Err(CliError::Usage(format!(
            "{} belongs to plan {}, not {digest}",
            run_dir.display(),
            existing.trim()
        ))),
        Ok(_) => Ok(()),
        Err(_) => {
            std::fs::create_dir_all(run_dir)?;
            std::fs::write(pin, format!("{digest}\n"))?;
            Ok(())
        }
    }
}

pub fn run(cfg: &RunConfig, max_new: Option<usize>) -> Result<Value, CliError> {
    let run_dir = RunConfig::require(&cfg.paths.run_dir, "--run-dir")?;
    let (mut plan, digest) = load_plan(cfg)?;
    if let Some(n) = cfg.max_cases {
        plan.truncate(n);
    }
    let catalog = catalog(cfg)?;
    let model = match &cfg.paths.mda_model {
        Some(p) => Some(MdaModel::load(p)?),
        None => None,
    };
    pin_plan(run_dir, &digest)?;
    let store = RunStore::open(run_dir)?;
    store.write_config(cfg)?;

    let cache_dir = cfg.paths.cache_dir.clone().unwrap_or_else(|| run_dir.join("cache"));
    let cache = ResponseCache::on_disk(&cache_dir).map_err(|e| CliError::Data(e.to_string()))?;
    let chat = ChatClient::http(&cfg.endpoint, cache);
    let sidecar_client = cfg.sidecar.as_ref().map(SidecarClient::new);
    let sidecar = sidecar_client.as_ref().and_then(Sidecar::connect);
    if sidecar_client.is_some() && sidecar.is_none() {
        eprintln!("warning: scoring sidecar unreachable; neural metrics will be empty");
    }
    let ctx = ScoreContext {
        catalog: &catalog,
        model: model.as_ref(),
        sidecar,
    };
    let pipeline = Pipeline::new(&chat, cfg.endpoint.model.clone(), cfg.seed);
    let opts = BatchOptions {
        threads: cfg.threads,
        max_new,
    };
    let summary = run_batch(&pipeline, &plan.cases, &cfg.systems, &store, opts, &|c, r| ctx.score(c, r))?;
    let out = json!({
        "run_dir": run_dir,
        "plan_digest": digest,
        "cases": plan.cases.len(),
        "summary": summary,
    });
    if summary.provider_failures > 0 {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Err(CliError::Provider(format!(
            "{} runs degraded because the chat endpoint failed",
            summary.provider_failures
        )));
    }
    if summary.unscored > 0 {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Err(CliError::Data(format!("{} runs could not be scored", summary.unscored)));
    }
    Ok(out)
}

pub fn report(cfg: &RunConfig) -> Result<(Value, String), CliError> {
    let run_dir = RunConfig::require(&cfg.paths.run_dir, "--run-dir")?;
    let cases = match &cfg.paths.plan {
        Some(_) => load_plan(cfg)?.0.cases,
        None => Vec::new(),
    };
    let records = if run_dir.join("index.jsonl").exists() {
        RunStore::open(run_dir)?.load_all()?
    } else {
        Vec::new()
    };
    let opts = ReportOptions {
        x_column: cfg.x_column.clone(),
        top_k: cfg.top_k,
    };
    let (bundle, files) = write_report(&run_dir.join("report"), &cases, &records, &opts)?;
    let summary = json!({
        "records": records.len(),
        "systems": bundle.table.rows.len(),
        "frontier": bundle.frontier.iter().map(|p| &p.system).collect::<Vec<_>>(),
        "files": files,
    });
    Ok((summary, bundle.to_text()))
}

pub fn mock_server(addr: &str, script: Option<&Path>) -> Result<(), CliError> {
    let config: MockConfig = match script {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("script {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("script {}: {e}", p.display())))?
        }
        None => MockConfig::default(),
    };
    let server = MockServer::bind(addr, config).map_err(|e| CliError::Usage(format!("bind {addr}: {e}")))?;
    println!("{}", server.url());
    use std::io::Write;
    std::io::stdout().flush()?;
    server.wait();
    Ok(())
}
