//! End-to-end run: generate a corpus, then ingest, score, label, measure
//! polarization and counterfactual effects, and render the report.
//!
//! Usage: `cargo run --example synthetic_pipeline [OUT_DIR]`

use std::path::PathBuf;

use polarlens::pipeline::{run_pipeline, run_synth, PipelineConfig};

fn main() -> polarlens::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("polarlens-run"));
    let cfg = PipelineConfig { out: out.clone(), ..PipelineConfig::default() };
    cfg.validate()?;
    let corpus = run_synth(&cfg)?;
    println!("generated {} tweets with {} planted conversations", corpus.tweets.len(), corpus.manifest.len());
    let summary = run_pipeline(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    println!("artifacts in {}", out.display());
    Ok(())
}
