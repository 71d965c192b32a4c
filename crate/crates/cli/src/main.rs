mod commands;
mod config;
mod error;
mod oracle_gen;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use regstyle::biber::Rotation;
use regstyle::datasets::Variant;
use regstyle::pipeline::System;
use regstyle::providers::SidecarConfig;

use config::RunConfig;
use error::CliError;

/// Example-based style transfer runs: plan cases, fit the register model,
/// run the prompting systems and report.
#[derive(Parser)]
#[command(name = "regstyle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an evaluation plan from a corpus.
    Plan(Common),
    /// Fit the register (MDA) model on a corpus.
    MdaFit(Common),
    /// Run the selected systems over a plan, resuming where a previous run stopped.
    Run {
        #[command(flatten)]
        common: Common,
        /// Stop after this many new (case, system) pairs.
        #[arg(long)]
        max_new: Option<usize>,
    },
    /// Aggregate a run directory into tables, frontier plots and descriptor counts.
    Report(Common),
    /// Regenerate the metric fixture from the brute-force reference implementations.
    OracleGen {
        #[arg(long, default_value = "crates/core/tests/fixtures/metric_oracle.json")]
        out: PathBuf,
        #[arg(long, default_value_t = oracle_gen::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = oracle_gen::DEFAULT_COUNT)]
        count: usize,
    },
    /// Serve the scripted chat and scorer endpoints on localhost.
    MockServer {
        #[arg(long, default_value = "127.0.0.1:0")]
        addr: String,
        /// JSON mock configuration (rules, failures, delays).
        #[arg(long)]
        script: Option<PathBuf>,
    },
}

/// Flags shared by the data commands. Each overrides the matching key of
/// the `--config` file.
#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// random, single, diverse, em_i2f, em_f2i, fr_i2f, fr_f2i or cochrane.
    #[arg(long)]
    variant: Option<Variant>,
    /// Comma-separated systems (copy, target, gold, simple, styll, rg, rg_contrastive).
    #[arg(long, value_delimiter = ',')]
    systems: Option<Vec<System>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pool texts per GYAFC exemplar.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    authors_per_side: Option<usize>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    run_dir: Option<PathBuf>,
    #[arg(long)]
    mda_model: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Base URL of the chat-completions server.
    #[arg(long)]
    endpoint_url: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long, env = "REGSTYLE_API_KEY", hide_env_values = true)]
    api_key: Option<String>,
    #[arg(long)]
    api_key_header: Option<String>,
    #[arg(long)]
    concurrency: Option<usize>,
    #[arg(long)]
    retry_base_ms: Option<u64>,
    /// Base URL of the scoring sidecar.
    #[arg(long)]
    sidecar_url: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// Only use the first N cases of the plan.
    #[arg(long)]
    max_cases: Option<usize>,
    #[arg(long)]
    dimensions: Option<usize>,
    #[arg(long)]
    variance_threshold: Option<f64>,
    #[arg(long)]
    rotation: Option<RotationArg>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Metric column for the frontier's x-axis.
    #[arg(long)]
    x_column: Option<String>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum RotationArg {
    None,
    Varimax,
}

impl Common {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr => $($field:tt)+) => {
                if let Some(v) = $flag {
                    c.$($field)+ = v;
                }
            };
        }
        if self.variant.is_some() {
            c.variant = self.variant;
        }
        set!(self.systems => systems);
        set!(self.seed => seed);
        set!(self.k => k);
        set!(self.authors_per_side => authors_per_side);
        for (flag, slot) in [
            (self.corpus, &mut c.paths.corpus),
            (self.plan, &mut c.paths.plan),
            (self.run_dir, &mut c.paths.run_dir),
            (self.mda_model, &mut c.paths.mda_model),
            (self.cache_dir, &mut c.paths.cache_dir),
            (self.catalog, &mut c.paths.catalog),
        ] {
            if flag.is_some() {
                *slot = flag;
            }
        }
        set!(self.endpoint_url => endpoint.base_url);
        set!(self.model => endpoint.model);
        set!(self.api_key_header => endpoint.api_key_header);
        set!(self.concurrency => endpoint.concurrency);
        set!(self.retry_base_ms => endpoint.retry_base_ms);
        if self.api_key.is_some() {
            c.endpoint.api_key = self.api_key;
        }
        if let Some(url) = self.sidecar_url {
            c.sidecar.get_or_insert_with(SidecarConfig::default).base_url = url;
        }
        set!(self.threads => threads);
        if self.max_cases.is_some() {
            c.max_cases = self.max_cases;
        }
        set!(self.dimensions => mda.dimensions);
        if self.variance_threshold.is_some() {
            c.mda.variance_threshold = self.variance_threshold;
        }
        if let Some(r) = self.rotation {
            c.mda.rotation = match r {
                RotationArg::None => Rotation::None,
                RotationArg::Varimax => Rotation::Varimax,
            };
        }
        set!(self.top_k => top_k);
        set!(self.x_column => x_column);
        c.validate()?;
        Ok(c)
    }
}

fn print(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Plan(common) => print(&commands::plan(&common.resolve()?)?),
        Command::MdaFit(common) => print(&commands::mda_fit(&common.resolve()?)?),
        Command::Run { common, max_new } => print(&commands::run(&common.resolve()?, max_new)?),
        Command::Report(common) => {
            let (summary, text) = commands::report(&common.resolve()?)?;
            print!("{text}");
            eprintln!("{}", serde_json::to_string(&summary).unwrap());
        }
        Command::OracleGen { out, seed, count } => {
            let fixture = oracle_gen::generate(seed, count);
            let body = serde_json::to_string_pretty(&fixture).unwrap() + "\n";
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&out, body)?;
            print(&serde_json::json!({"out": out, "cases": fixture.cases.len()}));
        }
        Command::MockServer { addr, script } => commands::mock_server(&addr, script.as_deref())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
