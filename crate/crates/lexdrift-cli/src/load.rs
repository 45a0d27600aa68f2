//! Shared artifact loaders and flag-value parsers. Parser errors surface
//! through clap as usage errors; loader errors are data errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::Context;
use serde::Deserialize;

use lexdrift::{
    ingest_jsonl, Corpus, FrequencyTable, Kind, SeedMode, ThresholdDirection, ThresholdUnit,
    TokenRules, Track,
};

pub fn corpus_label(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus")
        .to_string()
}

pub fn load_corpus(path: &Path, label: &str) -> anyhow::Result<Corpus> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let corpus =
        ingest_jsonl(file, label).with_context(|| format!("reading {}", path.display()))?;
    Ok(corpus)
}

pub fn load_table(path: &Path) -> anyhow::Result<FrequencyTable> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let table =
        FrequencyTable::from_csv(file).with_context(|| format!("reading {}", path.display()))?;
    Ok(table)
}

/// Token rules TOML: top-level lowercase, strip_punctuation,
/// min_token_length, and a [variant_merges] table. Missing keys keep their
/// defaults.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesFile {
    lowercase: Option<bool>,
    strip_punctuation: Option<bool>,
    min_token_length: Option<usize>,
    variant_merges: Option<BTreeMap<String, String>>,
}

pub fn load_rules(path: Option<&Path>) -> anyhow::Result<TokenRules> {
    let Some(path) = path else {
        return Ok(TokenRules::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let raw: RulesFile =
        toml::from_str(&text).with_context(|| format!("reading {}", path.display()))?;
    let defaults = TokenRules::default();
    let rules = TokenRules::new(
        raw.lowercase.unwrap_or(defaults.lowercase),
        raw.strip_punctuation.unwrap_or(defaults.strip_punctuation),
        raw.variant_merges
            .unwrap_or_else(|| defaults.variant_merges().clone()),
        raw.min_token_length.unwrap_or(defaults.min_token_length),
    )
    .with_context(|| format!("invalid rules in {}", path.display()))?;
    Ok(rules)
}

/// One word per line; blank lines skipped.
pub fn load_allowlist(path: &Path) -> anyhow::Result<BTreeSet<String>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut words = BTreeSet::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let word = line.trim();
        if !word.is_empty() {
            words.insert(word.to_string());
        }
    }
    Ok(words)
}

#[derive(Debug, Clone, Copy)]
pub struct ShiftRange {
    pub lo: i64,
    pub hi: i64,
}

pub fn parse_shift_range(s: &str) -> Result<ShiftRange, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad shift '{lo}'"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad shift '{hi}'"))?;
    Ok(ShiftRange { lo, hi })
}

pub fn parse_track(s: &str) -> Result<Track, String> {
    s.parse()
}

pub fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

pub fn parse_seed_mode(s: &str) -> Result<SeedMode, String> {
    if s == "document-index" {
        return Ok(SeedMode::DocumentIndex);
    }
    match s.strip_prefix("fixed:") {
        Some(n) => n
            .parse()
            .map(SeedMode::Fixed)
            .map_err(|_| format!("bad seed '{n}'")),
        None => Err(format!("expected document-index or fixed:N, got '{s}'")),
    }
}

pub fn parse_threshold_unit(s: &str) -> Result<ThresholdUnit, String> {
    match s {
        "inverse-relative" => Ok(ThresholdUnit::InverseRelative),
        "count" => Ok(ThresholdUnit::Count),
        _ => Err(format!("expected inverse-relative or count, got '{s}'")),
    }
}

pub fn parse_threshold_direction(s: &str) -> Result<ThresholdDirection, String> {
    match s {
        "floor" => Ok(ThresholdDirection::Floor),
        "ceiling" => Ok(ThresholdDirection::Ceiling),
        _ => Err(format!("expected floor or ceiling, got '{s}'")),
    }
}
