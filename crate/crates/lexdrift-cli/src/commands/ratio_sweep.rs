//! ratio-sweep: frequency ratios over shifted control groups, bin
//! statistics, and the target z-score on standard output.

use std::fs::File;
use std::path::PathBuf;

use anyhow::Context;
use serde_json::json;

use lexdrift::control::write_bins_csv;
use lexdrift::{bin_stats, build_group, rank_words, sweep_ratios, target_zscore, EXAMPLE_WORDS};

use crate::load::{load_table, parse_shift_range, ShiftRange};
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Frequency CSV for the corpus under study (numerator).
    #[arg(long, value_name = "CSV")]
    table_s: PathBuf,
    /// Frequency CSV for the reference corpus (denominator).
    #[arg(long, value_name = "CSV")]
    table_sprime: PathBuf,
    /// Frequency CSV defining the rank order; defaults to --table-sprime.
    #[arg(long, value_name = "CSV")]
    ranking_table: Option<PathBuf>,
    /// Comma-separated target words; defaults to the built-in example set.
    #[arg(long, value_delimiter = ',', value_name = "WORDS")]
    target_words: Option<Vec<String>>,
    /// Shift range.
    #[arg(
        long,
        default_value = "-250:250",
        value_parser = parse_shift_range,
        value_name = "LO:HI",
        allow_hyphen_values = true
    )]
    shifts: ShiftRange,
    /// Control points per bin.
    #[arg(long, default_value_t = 50)]
    bin_width: u32,
    /// Use the tables as-is instead of normalizing S to the S' total first.
    #[arg(long)]
    raw_counts: bool,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let words: Vec<String> = match &args.target_words {
        Some(words) => words.clone(),
        None => EXAMPLE_WORDS.iter().map(|w| w.to_string()).collect(),
    };
    let mut manifest = RunManifest::new(
        "ratio-sweep",
        json!({
            "target_words": words,
            "shifts": {"lo": args.shifts.lo, "hi": args.shifts.hi},
            "bin_width": args.bin_width,
            "raw_counts": args.raw_counts,
        }),
    );
    manifest.record_input(&args.table_s)?;
    manifest.record_input(&args.table_sprime)?;
    if let Some(path) = &args.ranking_table {
        manifest.record_input(path)?;
    }

    let table_sprime = load_table(&args.table_sprime)?;
    let mut table_s = load_table(&args.table_s)?;
    if !args.raw_counts {
        table_s = table_s.normalize_to_total(table_sprime.total())?;
    }
    let ranking = match &args.ranking_table {
        Some(path) => rank_words(&load_table(path)?),
        None => rank_words(&table_sprime),
    };

    let target = build_group(&words, &ranking)?;
    let sweep = sweep_ratios(
        &target,
        args.shifts.lo,
        args.shifts.hi,
        &ranking,
        &table_s,
        &table_sprime,
    )?;
    let bins = bin_stats(&sweep.points, args.bin_width)?;
    let z = target_zscore(&sweep.points, &bins)?;

    let sweep_path = args.out.join("sweep.csv");
    sweep.write_points_csv(File::create(&sweep_path).with_context(|| {
        format!("cannot create {}", sweep_path.display())
    })?)?;
    let bins_path = args.out.join("bins.csv");
    write_bins_csv(&bins, File::create(&bins_path)?)?;
    let skips_path = args.out.join("skips.csv");
    sweep.write_skips_csv(File::create(&skips_path)?)?;
    manifest.write(&args.out)?;

    eprintln!(
        "{} ratio points, {} skipped shifts, {} bins",
        sweep.points.len(),
        sweep.skipped.len(),
        bins.len()
    );
    println!("zscore {z}");
    Ok(())
}
