//! Corpus analytics for measuring lexical drift toward LLM-preferred
//! vocabulary.
//!
//! The library covers the full pipeline:
//!
//! - [`corpus`]: ingest, clean, tag, and filter documents (abstracts and
//!   presentation transcripts) into corpora with stable identities.
//! - [`lexical`]: tokenize text and build mergeable, rescalable
//!   word-frequency tables with rank orderings.
//! - [`control`]: rank-indexed word groups, shifted control groups,
//!   frequency-ratio sweeps, bin statistics, and target z-scores.
//! - [`sim`]: drive a chat-completion endpoint to produce the rewritten
//!   twin of a corpus and compute per-word frequency change rates.
//! - [`impact`]: the least-squares mixture estimate of rewrite impact,
//!   criteria-grid sweeps for error bars, and baseline calibration.
//!
//! Every stage reads and writes plain files (JSONL, CSV, TSV), so each is
//! independently testable and the whole pipeline is resumable.

pub mod control;
pub mod corpus;
pub mod impact;
pub mod lexical;
pub mod sim;

pub use control::{
    bin_stats, build_group, frequency_ratio, group_frequency, shifted_group, sweep_ratios,
    target_zscore, BinStats, ControlError, RatioPoint, RatioSweep, WordGroup,
};
pub use corpus::{
    ingest_jsonl, parse_vtt, strip_latex_artifacts, Corpus, CorpusError, CorpusFilter, Document,
    Kind, Track,
};
pub use impact::{
    calibrate, default_rate_grid, estimate_eta, read_estimate_csv, select_words, sweep_estimates,
    CalibratedSeries, EstimationInputs, FreqGrid, ImpactError, ImpactEstimate,
    ThresholdDirection, ThresholdUnit, WordSelection,
};
pub use lexical::{
    count_frequencies, rank_words, tokenize, FrequencyTable, LexicalError, Ranking, TokenRules,
};
pub use sim::{
    change_rates, revise_corpus, ChangeRates, DocStatus, SeedMode, SimError, SimulationConfig,
    SimulationPair,
};

/// The eight drift-marker words tracked throughout the default analyses.
pub const EXAMPLE_WORDS: [&str; 8] = [
    "significant",
    "crucial",
    "effectively",
    "additionally",
    "comprehensive",
    "enhance",
    "capabilities",
    "valuable",
];
