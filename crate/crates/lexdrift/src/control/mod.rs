//! Rank-indexed word groups and their shifted controls.
//!
//! The target group holds the words under study at ranks I; the control
//! group with shift n holds whatever words sit at ranks I+n. Comparing the
//! target's frequency ratio against the distribution of control ratios turns
//! "this word got more common" into a statistic with a null model: words of
//! similar rank that nobody suspects of drift.

mod bins;
mod sweep;

pub use bins::{bin_stats, target_zscore, write_bins_csv, BinStats};
pub use sweep::{sweep_ratios, RatioPoint, RatioSweep, SkippedShift};

use thiserror::Error;

use crate::lexical::{FrequencyTable, Ranking};

#[derive(Debug, Error)]
pub enum ControlError {
    #[error("word '{0}' not in ranking")]
    WordNotInRanking(String),
    #[error("rank {rank}{shift:+} = {target} outside 1..={size}")]
    ShiftOutOfRange {
        rank: usize,
        shift: i64,
        target: i64,
        size: usize,
    },
    #[error("zero denominator for group")]
    ZeroDenominator,
    #[error("degenerate control bin")]
    DegenerateControlBin,
    #[error("shift range {lo}..{hi} must straddle 0")]
    BadShiftRange { lo: i64, hi: i64 },
    #[error("bin width must be >= 1")]
    ZeroBinWidth,
    #[error("sweep has no points")]
    EmptySweep,
    #[error("sweep has no control points (all shifts are 0)")]
    NoControlPoints,
    #[error("sweep has no shift-0 point")]
    MissingTargetPoint,
    #[error("no bins provided")]
    NoBins,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Words at known ranks of a reference ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGroup {
    words: Vec<String>,
    indices: Vec<usize>,
    ranking_label: String,
}

impl WordGroup {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// 1-based ranks, parallel to [`words`](Self::words).
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ranking_label(&self) -> &str {
        &self.ranking_label
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Looks up each word's rank to form the target group. Input order is kept.
pub fn build_group<S: AsRef<str>>(words: &[S], ranking: &Ranking) -> Result<WordGroup, ControlError> {
    let mut group_words = Vec::with_capacity(words.len());
    let mut indices = Vec::with_capacity(words.len());
    for word in words {
        let word = word.as_ref();
        let rank = ranking
            .rank_of(word)
            .ok_or_else(|| ControlError::WordNotInRanking(word.to_string()))?;
        group_words.push(word.to_string());
        indices.push(rank);
    }
    Ok(WordGroup {
        words: group_words,
        indices,
        ranking_label: ranking.label().to_string(),
    })
}

/// The control group at shift `n`: the ranking's words at ranks i+n.
/// Any i+n outside [1, ranking size] is an error naming the offending rank.
pub fn shifted_group(group: &WordGroup, n: i64, ranking: &Ranking) -> Result<WordGroup, ControlError> {
    let size = ranking.len();
    let mut words = Vec::with_capacity(group.len());
    let mut indices = Vec::with_capacity(group.len());
    for &rank in &group.indices {
        let target = rank as i64 + n;
        if target < 1 || target > size as i64 {
            return Err(ControlError::ShiftOutOfRange {
                rank,
                shift: n,
                target,
                size,
            });
        }
        let target = target as usize;
        let word = ranking
            .word_at(target)
            .expect("target rank checked against ranking size");
        words.push(word.to_string());
        indices.push(target);
    }
    Ok(WordGroup {
        words,
        indices,
        ranking_label: group.ranking_label.clone(),
    })
}

/// F_n(S): the summed frequency of the group's words in `table`. Words the
/// table lacks contribute 0, since year-to-year vocabularies differ.
pub fn group_frequency(group: &WordGroup, table: &FrequencyTable) -> f64 {
    group.words.iter().map(|w| table.get(w)).sum()
}

/// R_n(S, S') = F_n(S) / F_n(S'). Both tables must already be normalized to
/// a common total for the ratio to be meaningful.
pub fn frequency_ratio(
    group: &WordGroup,
    table_s: &FrequencyTable,
    table_sprime: &FrequencyTable,
) -> Result<f64, ControlError> {
    let denom = group_frequency(group, table_sprime);
    if denom == 0.0 {
        return Err(ControlError::ZeroDenominator);
    }
    Ok(group_frequency(group, table_s) / denom)
}
