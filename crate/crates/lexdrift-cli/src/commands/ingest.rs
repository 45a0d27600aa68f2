//! ingest: one normalized documents.jsonl from .vtt files or raw JSONL.

use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde_json::json;

use lexdrift::corpus::write_jsonl;
use lexdrift::{parse_vtt, strip_latex_artifacts, Corpus, Document, Kind, Track};

use crate::load::{load_corpus, parse_kind, parse_track};
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory of .vtt subtitle files, one transcript document per file.
    #[arg(long, value_name = "DIR", required_unless_present = "jsonl", conflicts_with = "jsonl")]
    vtt_dir: Option<PathBuf>,
    /// JSONL corpus to validate and rewrite in normalized form.
    #[arg(long, value_name = "FILE")]
    jsonl: Option<PathBuf>,
    /// Corpus label.
    #[arg(long, default_value = "corpus")]
    label: String,
    /// Venue tag for .vtt documents.
    #[arg(long, default_value = "unknown")]
    venue: String,
    /// Year tag for .vtt documents.
    #[arg(long, required_unless_present = "jsonl")]
    year: Option<i32>,
    /// Track tag for .vtt documents.
    #[arg(long, default_value = "unknown", value_parser = parse_track)]
    track: Track,
    /// Kind tag for .vtt documents.
    #[arg(long, default_value = "transcript", value_parser = parse_kind)]
    kind: Kind,
    /// Fail on the first malformed input file instead of skipping it.
    #[arg(long)]
    strict: bool,
    /// Remove LaTeX wrappers and citations from document text.
    #[arg(long)]
    strip_latex: bool,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new(
        "ingest",
        json!({
            "label": args.label,
            "venue": args.venue,
            "year": args.year,
            "track": args.track,
            "kind": args.kind,
            "strict": args.strict,
            "strip_latex": args.strip_latex,
            "vtt_dir": args.vtt_dir.as_ref().map(|p| p.display().to_string()),
            "jsonl": args.jsonl.as_ref().map(|p| p.display().to_string()),
        }),
    );

    let mut corpus = match (&args.vtt_dir, &args.jsonl) {
        (Some(dir), _) => ingest_vtt_dir(dir, &args, &mut manifest)?,
        (None, Some(path)) => {
            manifest.record_input(path)?;
            load_corpus(path, &args.label)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };

    if args.strip_latex {
        corpus = strip_corpus(&corpus)?;
    }

    let out_path = args.out.join("documents.jsonl");
    let file = File::create(&out_path)
        .with_context(|| format!("cannot create {}", out_path.display()))?;
    write_jsonl(&corpus, file)?;
    manifest.write(&args.out)?;
    eprintln!("ingested {} documents into {}", corpus.len(), out_path.display());
    Ok(())
}

fn ingest_vtt_dir(dir: &Path, args: &Args, manifest: &mut RunManifest) -> anyhow::Result<Corpus> {
    let year = args.year.expect("clap requires --year with --vtt-dir");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read {}", dir.display()))?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("vtt"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        eprintln!("warning: no .vtt files in {}", dir.display());
    }

    let mut documents = Vec::new();
    for path in &paths {
        manifest.record_input(path)?;
        let bytes = std::fs::read(path)?;
        let text = match parse_vtt(&bytes) {
            Ok(text) => text,
            Err(e) if args.strict => bail!("{}: {e}", path.display()),
            Err(e) => {
                eprintln!("warning: skipping {}: {e}", path.display());
                continue;
            }
        };
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        documents.push(Document::new(
            id,
            args.venue.as_str(),
            year,
            args.track,
            args.kind,
            text,
        )?);
    }
    Ok(Corpus::new(args.label.as_str(), documents)?)
}

fn strip_corpus(corpus: &Corpus) -> anyhow::Result<Corpus> {
    let documents = corpus
        .documents()
        .iter()
        .map(|doc| {
            let stripped = strip_latex_artifacts(&doc.text);
            for warning in &stripped.warnings {
                eprintln!("warning: {}: {warning}", doc.id);
            }
            Document {
                text: stripped.text,
                ..doc.clone()
            }
        })
        .collect();
    Ok(Corpus::new(corpus.label(), documents)?)
}
