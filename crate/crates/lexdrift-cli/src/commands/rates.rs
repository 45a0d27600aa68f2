//! rates: per-word frequency change between an original corpus and its
//! revised twin, over the documents both share.

use std::collections::BTreeSet;
use std::fs::File;
use std::path::PathBuf;

use anyhow::bail;
use serde_json::json;

use lexdrift::{change_rates, count_frequencies};

use crate::load::{corpus_label, load_corpus, load_rules};
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Original corpus (pair_original.jsonl).
    #[arg(long, value_name = "FILE")]
    original: PathBuf,
    /// Revised corpus (pair_revised.jsonl).
    #[arg(long, value_name = "FILE")]
    revised: PathBuf,
    /// Token rules TOML file.
    #[arg(long, value_name = "FILE")]
    rules: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new("rates", json!({}));
    manifest.record_input(&args.original)?;
    manifest.record_input(&args.revised)?;
    if let Some(path) = &args.rules {
        manifest.record_input(path)?;
    }

    let original = load_corpus(&args.original, &corpus_label(&args.original))?;
    let revised = load_corpus(&args.revised, &corpus_label(&args.revised))?;

    // Restrict both sides to shared ids so failed documents drop out of
    // the comparison entirely.
    let ids_original: BTreeSet<String> =
        original.documents().iter().map(|d| d.id.clone()).collect();
    let ids_revised: BTreeSet<String> =
        revised.documents().iter().map(|d| d.id.clone()).collect();
    let shared: BTreeSet<String> = ids_original.intersection(&ids_revised).cloned().collect();
    if shared.is_empty() {
        bail!("no shared document ids between the two corpora");
    }
    let original = original.retain_ids(&shared);
    let revised = revised.retain_ids(&shared);

    let rules = load_rules(args.rules.as_deref())?;
    let table_original = count_frequencies(&original, &rules);
    let table_revised =
        count_frequencies(&revised, &rules).normalize_to_total(table_original.total())?;
    let rates = change_rates(&table_original, &table_revised);

    let rates_path = args.out.join("rates.csv");
    rates.write_csv(File::create(&rates_path)?)?;
    let excluded_path = args.out.join("rates_excluded.csv");
    rates.write_excluded_csv(File::create(&excluded_path)?)?;
    manifest.write(&args.out)?;

    eprintln!(
        "rates for {} words over {} shared documents ({} excluded) -> {}",
        rates.len(),
        shared.len(),
        rates.excluded().len(),
        rates_path.display()
    );
    Ok(())
}
