//! estimate: mixture-model eta over the criteria grid.

use std::collections::BTreeSet;
use std::fs::File;
use std::path::PathBuf;

use anyhow::Context;
use serde_json::json;

use lexdrift::{
    default_rate_grid, sweep_estimates, ChangeRates, EstimationInputs, FreqGrid,
    ThresholdDirection, ThresholdUnit,
};

use crate::load::{
    load_allowlist, load_table, parse_threshold_direction, parse_threshold_unit,
};
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Observed-year frequency CSV (the corpus under influence).
    #[arg(long, value_name = "CSV")]
    observed: PathBuf,
    /// Counterfactual baseline frequency CSV.
    #[arg(long, value_name = "CSV")]
    baseline: PathBuf,
    /// Change-rate CSV from the rates command.
    #[arg(long, value_name = "CSV")]
    rates: PathBuf,
    /// Comma-separated baseline-frequency thresholds.
    #[arg(long, value_delimiter = ',', value_name = "VALUES")]
    grid_f: Option<Vec<f64>>,
    /// Comma-separated change-rate thresholds.
    #[arg(long, value_delimiter = ',', value_name = "VALUES")]
    grid_r: Option<Vec<f64>>,
    /// How --grid-f values convert to count thresholds.
    #[arg(long, default_value = "inverse-relative", value_parser = parse_threshold_unit)]
    f_unit: ThresholdUnit,
    /// Whether the baseline threshold is a floor or a ceiling.
    #[arg(long, default_value = "floor", value_parser = parse_threshold_direction)]
    f_direction: ThresholdDirection,
    /// Word allowlist file, one word per line.
    #[arg(long, value_name = "FILE")]
    allowlist: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,
    /// Output file name inside --out.
    #[arg(long, default_value = "estimate.csv")]
    output_name: String,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out)?;
    let grid_f = FreqGrid {
        values: args.grid_f.clone().unwrap_or_else(|| FreqGrid::default().values),
        unit: args.f_unit,
        direction: args.f_direction,
    };
    let grid_r = args.grid_r.clone().unwrap_or_else(default_rate_grid);

    let mut manifest = RunManifest::new(
        "estimate",
        json!({
            "grid_f": grid_f,
            "grid_r": grid_r,
            "output_name": args.output_name,
        }),
    );
    manifest.record_input(&args.observed)?;
    manifest.record_input(&args.baseline)?;
    manifest.record_input(&args.rates)?;
    if let Some(path) = &args.allowlist {
        manifest.record_input(path)?;
    }

    let baseline = load_table(&args.baseline)?;
    let observed = load_table(&args.observed)?.normalize_to_total(baseline.total())?;
    let rates_file = File::open(&args.rates)
        .with_context(|| format!("cannot open {}", args.rates.display()))?;
    let rates = ChangeRates::from_csv(rates_file)
        .with_context(|| format!("reading {}", args.rates.display()))?;
    let allowlist = match &args.allowlist {
        Some(path) => load_allowlist(path)?,
        None => BTreeSet::new(),
    };

    let inputs = EstimationInputs::new(observed, baseline, rates)?;
    let estimate = sweep_estimates(&inputs, &grid_f, &grid_r, &allowlist)?;

    let estimate_path = args.out.join(&args.output_name);
    estimate.write_csv(File::create(&estimate_path)?)?;
    let skipped_path = args.out.join("estimate_skipped.csv");
    estimate.write_skipped_csv(File::create(&skipped_path)?)?;
    let residuals_path = args.out.join("residuals.csv");
    estimate.write_residuals_csv(File::create(&residuals_path)?)?;
    manifest.write(&args.out)?;

    eprintln!(
        "{} grid cells ({} skipped), central cell min_f={} min_r={}",
        estimate.eta_by_criteria.len(),
        estimate.skipped.len(),
        estimate.central_cell.0,
        estimate.central_cell.1
    );
    println!("eta mean {} std {}", estimate.mean_eta, estimate.std_eta);
    Ok(())
}
