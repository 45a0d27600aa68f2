//! lexdrift: the corpus-analytics pipeline as subcommands over file
//! artifacts. Every stage reads files, writes files plus a run manifest,
//! and is deterministic given those inputs (network only in `simulate`,
//! and even that is a pure cache lookup with --cached-only).

mod commands;
mod load;
mod manifest;

use clap::{Parser, Subcommand};

use commands::{estimate, freq, ingest, rates, ratio_sweep, report, simulate};

#[derive(Parser)]
#[command(
    name = "lexdrift",
    version,
    about = "Word-frequency drift and LLM-impact estimation over document corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a normalized documents.jsonl from .vtt files or raw JSONL.
    Ingest(ingest::Args),
    /// Count word frequencies for a corpus slice.
    Freq(freq::Args),
    /// Sweep frequency ratios over shifted control groups and print the target z-score.
    RatioSweep(ratio_sweep::Args),
    /// Revise a corpus through a chat-completion endpoint.
    Simulate(simulate::Args),
    /// Per-word change rates between an original corpus and its revised twin.
    Rates(rates::Args),
    /// Mixture-model eta estimates over the criteria grid.
    Estimate(estimate::Args),
    /// Bundle pipeline outputs into tidy plot-data CSVs.
    Report(report::Args),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors exit 1 by contract; --help and --version exit 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Ingest(args) => ingest::run(args),
        Command::Freq(args) => freq::run(args),
        Command::RatioSweep(args) => ratio_sweep::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Rates(args) => rates::run(args),
        Command::Estimate(args) => estimate::run(args),
        Command::Report(args) => report::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}

/// 2 for data problems, 3 for network problems; usage errors never get here.
fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(sim) = cause.downcast_ref::<lexdrift::SimError>() {
            return match sim {
                lexdrift::SimError::Auth { .. } => 3,
                _ => 2,
            };
        }
    }
    2
}
