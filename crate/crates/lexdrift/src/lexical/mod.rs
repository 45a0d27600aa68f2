//! Tokenization and word-frequency accounting.
//!
//! Everything downstream (control groups, change rates, the mixture
//! estimate) consumes [`FrequencyTable`]s built here, so the tokenizer rules
//! are a value type that travels with the pipeline: two tables are only
//! comparable when built under identical [`TokenRules`].

mod rank;
mod table;

pub use rank::{rank_words, Ranking};
pub use table::FrequencyTable;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::Corpus;

#[derive(Debug, Error)]
pub enum LexicalError {
    #[error("cannot normalize empty table")]
    NormalizeEmptyTable,
    #[error("reference total must be positive, got {0}")]
    NonpositiveReference(f64),
    #[error("negative count {count} for word '{word}'")]
    NegativeCount { word: String, count: f64 },
    #[error("non-finite count for word '{word}'")]
    NonFiniteCount { word: String },
    #[error("table contains the reserved word '__total__'")]
    ReservedWord,
    #[error("variant merge '{from}'->'{to}' is not idempotent: '{to}' maps elsewhere")]
    NonIdempotentMerge { from: String, to: String },
    #[error("min_token_length must be >= 1")]
    ZeroMinTokenLength,
    #[error("line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
    #[error("table total {stated} does not match sum of counts {computed}")]
    InconsistentTotal { stated: f64, computed: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Tokenizer configuration.
///
/// With `strip_punctuation` set, tokens are maximal runs of Unicode letters
/// (digits and hyphens split tokens); without it, text splits on whitespace
/// and chunks are kept verbatim. Lowercasing, variant merges, and the
/// minimum-length filter apply in that order after splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRules {
    pub lowercase: bool,
    pub strip_punctuation: bool,
    variant_merges: BTreeMap<String, String>,
    pub min_token_length: usize,
}

impl Default for TokenRules {
    fn default() -> Self {
        let mut merges = BTreeMap::new();
        merges.insert("ok".to_string(), "okay".to_string());
        TokenRules {
            lowercase: true,
            strip_punctuation: true,
            variant_merges: merges,
            min_token_length: 1,
        }
    }
}

impl TokenRules {
    /// Builds rules, checking that merges are idempotent (no canonical word
    /// maps elsewhere) and the length floor is at least 1.
    pub fn new(
        lowercase: bool,
        strip_punctuation: bool,
        variant_merges: BTreeMap<String, String>,
        min_token_length: usize,
    ) -> Result<Self, LexicalError> {
        if min_token_length < 1 {
            return Err(LexicalError::ZeroMinTokenLength);
        }
        for (from, to) in &variant_merges {
            if let Some(further) = variant_merges.get(to) {
                if further != to {
                    return Err(LexicalError::NonIdempotentMerge {
                        from: from.clone(),
                        to: to.clone(),
                    });
                }
            }
        }
        Ok(TokenRules {
            lowercase,
            strip_punctuation,
            variant_merges,
            min_token_length,
        })
    }

    pub fn variant_merges(&self) -> &BTreeMap<String, String> {
        &self.variant_merges
    }

    fn canonical(&self, token: &str) -> String {
        match self.variant_merges.get(token) {
            Some(to) => to.clone(),
            None => token.to_string(),
        }
    }
}

/// Splits `text` into canonical tokens under `rules`.
pub fn tokenize(text: &str, rules: &TokenRules) -> Vec<String> {
    let chunks: Vec<String> = if rules.strip_punctuation {
        text.split(|c: char| !c.is_alphabetic())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        text.split_whitespace().map(str::to_string).collect()
    };

    chunks
        .into_iter()
        .map(|t| if rules.lowercase { t.to_lowercase() } else { t })
        .map(|t| rules.canonical(&t))
        .filter(|t| t.chars().count() >= rules.min_token_length)
        .collect()
}

/// Counts canonical-word occurrences across all documents of `corpus`.
/// Documents tokenize in parallel; the per-document tables fold together
/// deterministically afterward.
pub fn count_frequencies(corpus: &Corpus, rules: &TokenRules) -> FrequencyTable {
    let tables: Vec<FrequencyTable> = corpus
        .documents()
        .par_iter()
        .map(|doc| {
            let mut counts: BTreeMap<String, f64> = BTreeMap::new();
            for token in tokenize(&doc.text, rules) {
                *counts.entry(token).or_insert(0.0) += 1.0;
            }
            FrequencyTable::from_counts(counts).expect("occurrence counts are nonnegative")
        })
        .collect();
    FrequencyTable::merge(&tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Kind, Track};

    fn corpus_of(texts: &[&str]) -> Corpus {
        let docs = texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Document::new(format!("d{i}"), "v", 2024, Track::Poster, Kind::Abstract, *t)
                    .unwrap()
            })
            .collect();
        Corpus::new("test", docs).unwrap()
    }

    #[test]
    fn empty_text_yields_no_tokens() {
        assert!(tokenize("", &TokenRules::default()).is_empty());
    }

    #[test]
    fn punctuation_and_case_handled() {
        let tokens = tokenize("Significant, CRUCIAL!", &TokenRules::default());
        assert_eq!(tokens, vec!["significant", "crucial"]);
    }

    #[test]
    fn variant_merge_applied() {
        let tokens = tokenize("ok okay", &TokenRules::default());
        assert_eq!(tokens, vec!["okay", "okay"]);
    }

    #[test]
    fn digits_and_hyphens_split_tokens() {
        let tokens = tokenize("state-of-the-art gpt4 model", &TokenRules::default());
        assert_eq!(tokens, vec!["state", "of", "the", "art", "gpt", "model"]);
    }

    #[test]
    fn whitespace_mode_keeps_chunks() {
        let rules = TokenRules::new(true, false, BTreeMap::new(), 1).unwrap();
        let tokens = tokenize("Significant, CRUCIAL!", &rules);
        assert_eq!(tokens, vec!["significant,", "crucial!"]);
    }

    #[test]
    fn min_length_filters_after_merges() {
        // "ok" merges to "okay" before the length-3 floor applies, so the
        // merge rescues it.
        let mut merges = BTreeMap::new();
        merges.insert("ok".to_string(), "okay".to_string());
        let rules = TokenRules::new(true, true, merges, 3).unwrap();
        assert_eq!(tokenize("ok to go", &rules), vec!["okay"]);
    }

    #[test]
    fn non_idempotent_merge_rejected() {
        let mut merges = BTreeMap::new();
        merges.insert("a".to_string(), "b".to_string());
        merges.insert("b".to_string(), "c".to_string());
        assert!(TokenRules::new(true, true, merges, 1).is_err());
    }

    #[test]
    fn self_mapping_canonical_accepted() {
        let mut merges = BTreeMap::new();
        merges.insert("ok".to_string(), "okay".to_string());
        merges.insert("okay".to_string(), "okay".to_string());
        assert!(TokenRules::new(true, true, merges, 1).is_ok());
    }

    #[test]
    fn counts_across_documents() {
        let table = count_frequencies(&corpus_of(&["a a b"]), &TokenRules::default());
        assert_eq!(table.get("a"), 2.0);
        assert_eq!(table.get("b"), 1.0);
        assert_eq!(table.total(), 3.0);
    }

    #[test]
    fn empty_corpus_empty_table() {
        let table = count_frequencies(&corpus_of(&[]), &TokenRules::default());
        assert!(table.is_empty());
        assert_eq!(table.total(), 0.0);
    }

    #[test]
    fn counting_is_additive_over_documents() {
        let table = count_frequencies(&corpus_of(&["a", "a"]), &TokenRules::default());
        assert_eq!(table.get("a"), 2.0);
    }

    #[test]
    fn unicode_letters_kept_together() {
        let tokens = tokenize("naïve café", &TokenRules::default());
        assert_eq!(tokens, vec!["naïve", "café"]);
    }
}
