use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polarlens::counterfactual::Scope;
use polarlens::graph::RemovalMode;
use polarlens::pipeline::{self, PipelineConfig};
use polarlens::polarization::WeightMode;
use polarlens::Error;
use serde::Serialize;

/// Stance, polarization and counterfactual influence analysis for reply networks.
#[derive(Parser)]
#[command(name = "polarlens", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Generate a seeded synthetic corpus with ground truth
    Synth,
    /// Parse the corpus, assemble conversations and rank influencers
    Ingest,
    /// Score tweet sentiment and build the interaction graph
    Sentiment,
    /// Label user stances
    Stance,
    /// Compute overall and daily E/I scores
    Polarize,
    /// Measure each influencer conversation's effect on polarization
    Counterfactual,
    /// Render summaries, markdown tables and the timeline plot
    Report,
    /// Run ingest through report in order
    Pipeline,
}

#[derive(clap::Args)]
struct Overrides {
    /// JSON config file; flags override its keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    weight_mode: Option<WeightMode>,
    #[arg(long, global = true)]
    removal_mode: Option<RemovalMode>,
    #[arg(long, global = true)]
    scope: Option<Scope>,
    #[arg(long, global = true)]
    min_tweets: Option<usize>,
    #[arg(long, global = true)]
    min_users: Option<usize>,
    #[arg(long, global = true)]
    top_k: Option<usize>,
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Manual lower threshold; skips calibration
    #[arg(long, global = true)]
    t1: Option<f64>,
    /// Manual upper threshold; skips calibration
    #[arg(long, global = true)]
    t2: Option<f64>,
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    seed_hashtags: Option<PathBuf>,
    #[arg(long, global = true)]
    external_scores: Option<PathBuf>,
    #[arg(long, global = true)]
    embeddings: Option<PathBuf>,
    #[arg(long, global = true)]
    followers: Option<PathBuf>,
    #[arg(long, global = true)]
    labels: Option<PathBuf>,
    #[arg(long, global = true)]
    synth_config: Option<PathBuf>,
}

macro_rules! apply {
    ($cfg:ident, $o:ident; $($field:ident),*) => {
        $(if let Some(v) = $o.$field.clone() { $cfg.$field = v.into(); })*
    };
}

impl Overrides {
    fn resolve(&self) -> polarlens::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) if !p.exists() => return Err(Error::MissingInput(p.clone())),
            Some(p) => PipelineConfig::from_file(p)?,
            None => PipelineConfig::default(),
        };
        let o = self;
        apply!(cfg, o; out, weight_mode, removal_mode, scope, min_tweets, min_users, top_k, tau, t1, t2,
            corpus, lexicon, seed_hashtags, external_scores, embeddings, followers, labels, synth_config);
        if let Some(seed) = self.seed {
            cfg.rng_seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct ErrorReport {
    error: &'static str,
    message: String,
    exit_code: u8,
}

fn classify(e: &Error) -> (&'static str, u8) {
    match e {
        Error::MissingInput(_) => ("missing_input", 2),
        Error::InvalidArgument(_) | Error::Range(_) | Error::Malformed { .. } | Error::Json(_) | Error::Csv(_) => {
            ("validation", 3)
        }
        Error::NotFound(_) | Error::Numeric(_) | Error::Io(_) => ("internal", 4),
    }
}

fn print_json<T: Serialize>(value: &T) -> polarlens::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(command: Command, cfg: &PipelineConfig) -> polarlens::Result<()> {
    match command {
        Command::Synth => {
            let corpus = pipeline::run_synth(cfg)?;
            print_json(&serde_json::json!({
                "tweets": corpus.tweets.len(),
                "planted_conversations": corpus.manifest.len(),
                "out": cfg.out,
            }))
        }
        Command::Ingest => print_json(&pipeline::run_ingest(cfg)?),
        Command::Sentiment => print_json(&pipeline::run_sentiment(cfg)?),
        Command::Stance => print_json(&pipeline::run_stance(cfg)?.1),
        Command::Polarize => {
            let (overall, _) = pipeline::run_polarize(cfg)?;
            print_json(&overall)
        }
        Command::Counterfactual => print_json(&pipeline::run_counterfactual(cfg)?.1),
        Command::Report => pipeline::run_report(cfg),
        Command::Pipeline => print_json(&pipeline::run_pipeline(cfg)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("POLARLENS_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = cli.overrides.resolve().and_then(|cfg| run(cli.command, &cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            let report = ErrorReport { error: kind, message: e.to_string(), exit_code: code };
            eprintln!("{}", serde_json::to_string(&report).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(code)
        }
    }
}
