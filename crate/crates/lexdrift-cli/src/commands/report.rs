//! report: bundle prior stage outputs into tidy plot-data CSVs.
//!
//! Reads from --in by naming convention: freq_<year>.csv for the per-year
//! frequency series, sweep.csv and bins.csv from ratio-sweep, and
//! estimate_<year>.csv for the impact series. Available inputs produce
//! their bundle files; absent ones are recorded as gaps in the manifest.
//! Nothing available at all is an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde_json::json;

use lexdrift::{calibrate, read_estimate_csv, ImpactError, EXAMPLE_WORDS};

use crate::load::load_table;
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory holding the pipeline outputs to bundle.
    #[arg(long = "in", value_name = "DIR")]
    input: PathBuf,
    /// Comma-separated baseline years for calibrating the impact series.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2021, 2022])]
    baseline_years: Vec<i32>,
    /// Words for the per-year frequency series; defaults to the built-in
    /// example set.
    #[arg(long, value_delimiter = ',', value_name = "WORDS")]
    words: Option<Vec<String>>,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let words: Vec<String> = match &args.words {
        Some(words) => words.clone(),
        None => EXAMPLE_WORDS.iter().map(|w| w.to_string()).collect(),
    };
    let mut manifest = RunManifest::new("report", json!({}));

    let freq_by_year = files_by_year(&args.input, "freq_")?;
    let estimate_by_year = files_by_year(&args.input, "estimate_")?;
    let sweep_path = existing(args.input.join("sweep.csv"));
    let bins_path = existing(args.input.join("bins.csv"));

    let mut bundle: Vec<&str> = Vec::new();
    let mut gaps: Vec<&str> = Vec::new();

    if freq_by_year.is_empty() {
        gaps.push("word_freq_by_year.csv");
    } else {
        write_word_freq(&freq_by_year, &words, &args.out, &mut manifest)?;
        bundle.push("word_freq_by_year.csv");
    }

    match &sweep_path {
        Some(path) => {
            manifest.record_input(path)?;
            std::fs::copy(path, args.out.join("ratio_sweep.csv"))?;
            bundle.push("ratio_sweep.csv");
        }
        None => gaps.push("ratio_sweep.csv"),
    }
    match &bins_path {
        Some(path) => {
            manifest.record_input(path)?;
            std::fs::copy(path, args.out.join("ratio_bins.csv"))?;
            bundle.push("ratio_bins.csv");
        }
        None => gaps.push("ratio_bins.csv"),
    }

    if estimate_by_year.is_empty() {
        gaps.push("impact_series.csv");
    } else {
        let written = write_impact_series(
            &estimate_by_year,
            &args.baseline_years,
            &args.out,
            &mut manifest,
        )?;
        if written {
            bundle.push("impact_series.csv");
        } else {
            gaps.push("impact_series.csv");
        }
    }

    if bundle.is_empty() {
        bail!(
            "missing upstream file {}: no freq_<year>.csv, sweep.csv, bins.csv, or estimate_<year>.csv",
            args.input.join("freq_<year>.csv").display()
        );
    }

    manifest.parameters = json!({
        "baseline_years": args.baseline_years,
        "words": words,
        "bundle": bundle,
        "gaps": gaps,
    });
    manifest.write(&args.out)?;

    if gaps.is_empty() {
        eprintln!("bundle complete: {} files", bundle.len());
    } else {
        eprintln!("bundle has gaps: {}", gaps.join(", "));
    }
    Ok(())
}

fn existing(path: PathBuf) -> Option<PathBuf> {
    path.is_file().then_some(path)
}

/// Files named <prefix><year>.csv, keyed by year.
fn files_by_year(dir: &Path, prefix: &str) -> anyhow::Result<BTreeMap<i32, PathBuf>> {
    let mut found = BTreeMap::new();
    let entries = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read {}", dir.display()))?;
    for entry in entries {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let year = name
            .strip_prefix(prefix)
            .and_then(|rest| rest.strip_suffix(".csv"))
            .and_then(|y| y.parse::<i32>().ok());
        if let Some(year) = year {
            found.insert(year, path);
        }
    }
    Ok(found)
}

fn write_word_freq(
    tables: &BTreeMap<i32, PathBuf>,
    words: &[String],
    out: &Path,
    manifest: &mut RunManifest,
) -> anyhow::Result<()> {
    let path = out.join("word_freq_by_year.csv");
    let mut writer = csv::Writer::from_writer(File::create(&path)?);
    writer.write_record(["year", "word", "count", "total"])?;
    for (year, table_path) in tables {
        manifest.record_input(table_path)?;
        let table = load_table(table_path)?;
        for word in words {
            writer.write_record([
                year.to_string(),
                word.clone(),
                table.get(word).to_string(),
                table.total().to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Returns false (a gap, not an error) when the series cannot be
/// calibrated because a requested baseline year has no estimate file.
fn write_impact_series(
    estimates: &BTreeMap<i32, PathBuf>,
    baseline_years: &[i32],
    out: &Path,
    manifest: &mut RunManifest,
) -> anyhow::Result<bool> {
    let mut series = BTreeMap::new();
    for (year, path) in estimates {
        manifest.record_input(path)?;
        let file = File::open(path)
            .with_context(|| format!("cannot open {}", path.display()))?;
        let (_, mean, _) = read_estimate_csv(file)
            .with_context(|| format!("reading {}", path.display()))?;
        series.insert(*year, mean);
    }
    let baseline: BTreeSet<i32> = baseline_years.iter().copied().collect();
    let calibrated = match calibrate(&series, &baseline) {
        Ok(calibrated) => calibrated,
        Err(err @ ImpactError::MissingBaselineYear(_)) => {
            eprintln!("warning: impact series not calibrated: {err}");
            return Ok(false);
        }
        Err(err) => return Err(err.into()),
    };
    calibrated.write_csv(File::create(out.join("impact_series.csv"))?)?;
    Ok(true)
}
