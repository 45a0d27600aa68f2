//! freq: word frequencies for a corpus slice, optionally normalized.

use std::collections::BTreeSet;
use std::fs::File;
use std::path::PathBuf;

use anyhow::Context;
use serde_json::json;

use lexdrift::{count_frequencies, CorpusFilter, Kind, Track};

use crate::load::{corpus_label, load_corpus, load_rules, load_table, parse_kind, parse_track};
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// documents.jsonl to count.
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Keep only these venues (repeatable).
    #[arg(long)]
    venue: Vec<String>,
    /// Keep only these years (repeatable).
    #[arg(long)]
    year: Vec<i32>,
    /// Keep only these tracks (repeatable).
    #[arg(long, value_parser = parse_track)]
    track: Vec<Track>,
    /// Keep only these kinds (repeatable).
    #[arg(long, value_parser = parse_kind)]
    kind: Vec<Kind>,
    /// Token rules TOML file.
    #[arg(long, value_name = "FILE")]
    rules: Option<PathBuf>,
    /// Rescale counts to a numeric total, or to the total of another
    /// frequency CSV given by path.
    #[arg(long, value_name = "TOTAL|CSV")]
    normalize_to: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
    /// Output file name inside --out.
    #[arg(long, default_value = "freq.csv")]
    output_name: String,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new(
        "freq",
        json!({
            "venues": args.venue,
            "years": args.year,
            "tracks": args.track,
            "kinds": args.kind,
            "normalize_to": args.normalize_to,
            "output_name": args.output_name,
        }),
    );
    manifest.record_input(&args.corpus)?;
    if let Some(path) = &args.rules {
        manifest.record_input(path)?;
    }

    let corpus = load_corpus(&args.corpus, &corpus_label(&args.corpus))?;
    let filter = CorpusFilter {
        venues: to_set(args.venue),
        years: to_set(args.year),
        tracks: to_set(args.track),
        kinds: to_set(args.kind),
    };
    let selected = if filter.is_empty() {
        corpus
    } else {
        corpus.select(&filter)
    };

    let rules = load_rules(args.rules.as_deref())?;
    let mut table = count_frequencies(&selected, &rules);

    if let Some(target) = &args.normalize_to {
        let reference = match target.parse::<f64>() {
            Ok(total) => total,
            Err(_) => {
                let path = PathBuf::from(target);
                manifest.record_input(&path)?;
                load_table(&path)?.total()
            }
        };
        table = table.normalize_to_total(reference)?;
    }

    let out_path = args.out.join(&args.output_name);
    let file = File::create(&out_path)
        .with_context(|| format!("cannot create {}", out_path.display()))?;
    table.to_csv(file)?;
    manifest.write(&args.out)?;
    eprintln!(
        "{} words over {} documents -> {}",
        table.len(),
        selected.len(),
        out_path.display()
    );
    Ok(())
}

fn to_set<T: Ord>(values: Vec<T>) -> Option<BTreeSet<T>> {
    if values.is_empty() {
        None
    } else {
        Some(values.into_iter().collect())
    }
}
