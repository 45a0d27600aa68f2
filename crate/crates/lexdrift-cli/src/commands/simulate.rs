//! simulate: revise a corpus through a chat-completion endpoint and write
//! the original/revised pair plus per-document statuses.

use std::fs::File;
use std::path::PathBuf;

use anyhow::Context;

use lexdrift::corpus::write_jsonl;
use lexdrift::{
    change_rates, count_frequencies, revise_corpus, SeedMode, SimulationConfig, SimulationPair,
    TokenRules, EXAMPLE_WORDS,
};

use crate::load::{corpus_label, load_corpus, parse_seed_mode};
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// documents.jsonl to revise.
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Chat-completion endpoint URL.
    #[arg(long, value_name = "URL")]
    endpoint: Option<String>,
    /// Model name sent with each request.
    #[arg(long)]
    model: Option<String>,
    /// Revision prompt prepended to each document.
    #[arg(long)]
    prompt: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    top_p: Option<f64>,
    /// Per-request seed: "document-index" or "fixed:N".
    #[arg(long, default_value = "document-index", value_parser = parse_seed_mode)]
    seed_mode: SeedMode,
    #[arg(long)]
    max_attempts: Option<u32>,
    /// Parallel requests in flight.
    #[arg(long)]
    concurrency: Option<usize>,
    /// Response cache directory; defaults to sim_cache inside --out.
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Serve everything from the cache; a miss is an error and the network
    /// is never touched.
    #[arg(long)]
    cached_only: bool,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let defaults = SimulationConfig::default();
    let config = SimulationConfig {
        endpoint_url: args.endpoint.clone().unwrap_or(defaults.endpoint_url),
        model_name: args.model.clone().unwrap_or(defaults.model_name),
        prompt: args.prompt.clone().unwrap_or(defaults.prompt),
        temperature: args.temperature.unwrap_or(defaults.temperature),
        top_p: args.top_p.unwrap_or(defaults.top_p),
        seed_mode: args.seed_mode,
        max_attempts: args.max_attempts.unwrap_or(defaults.max_attempts),
        concurrency_limit: args.concurrency.unwrap_or(defaults.concurrency_limit),
        cache_dir: args
            .cache_dir
            .clone()
            .unwrap_or_else(|| args.out.join("sim_cache")),
        cached_only: args.cached_only,
        retry_base_ms: defaults.retry_base_ms,
    };

    let mut manifest = RunManifest::new("simulate", serde_json::to_value(&config)?);
    manifest.record_input(&args.corpus)?;

    let corpus = load_corpus(&args.corpus, &corpus_label(&args.corpus))?;
    let pair = revise_corpus(&corpus, &config)?;

    let original_path = args.out.join("pair_original.jsonl");
    write_jsonl(&pair.original, File::create(&original_path)?)?;
    let revised_path = args.out.join("pair_revised.jsonl");
    write_jsonl(&pair.revised, File::create(&revised_path)?)?;
    write_statuses(&pair, &args.out.join("statuses.csv"))?;
    manifest.write(&args.out)?;

    let failed = pair.failed().count();
    eprintln!(
        "revised {} of {} documents ({failed} failed)",
        pair.revised.len(),
        pair.original.len()
    );
    note_direction(&pair);
    Ok(())
}

fn write_statuses(pair: &SimulationPair, path: &PathBuf) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(["id", "status", "reason"])?;
    for (id, status) in &pair.statuses {
        match status {
            lexdrift::DocStatus::Ok => writer.write_record([id, "ok", ""])?,
            lexdrift::DocStatus::Failed(reason) => {
                writer.write_record([id, "failed", reason])?
            }
        }
    }
    writer.flush()?;
    Ok(())
}

/// Sanity note, not a failure: under the reference protocol the example
/// words should become more frequent after revision.
fn note_direction(pair: &SimulationPair) {
    let (original, revised) = pair.aligned();
    if original.is_empty() || revised.is_empty() {
        return;
    }
    let rules = TokenRules::default();
    let table_original = count_frequencies(&original, &rules);
    let revised_counts = count_frequencies(&revised, &rules);
    let Ok(table_revised) = revised_counts.normalize_to_total(table_original.total()) else {
        return;
    };
    let rates = change_rates(&table_original, &table_revised);
    for word in EXAMPLE_WORDS {
        if let Some(rate) = rates.get(word) {
            if rate <= 0.0 {
                eprintln!("note: '{word}' did not become more frequent (rate {rate:.3})");
            }
        }
    }
}
