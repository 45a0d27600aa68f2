//! Frequency rankings: descending count, lexicographic tiebreak.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use super::{FrequencyTable, LexicalError};

/// Words ordered by rank 1..N. The tiebreak makes the order a pure function
/// of the table, which downstream control groups rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    label: String,
    words: Vec<String>,
    rank_by_word: BTreeMap<String, usize>,
}

/// Ranks the table's words by descending count, ties broken
/// lexicographically.
pub fn rank_words(table: &FrequencyTable) -> Ranking {
    let mut entries: Vec<(&String, &f64)> = table.counts().iter().collect();
    entries.sort_by(|(wa, ca), (wb, cb)| {
        cb.partial_cmp(ca)
            .expect("table counts are finite")
            .then_with(|| wa.cmp(wb))
    });
    let words: Vec<String> = entries.into_iter().map(|(w, _)| w.clone()).collect();
    Ranking::from_words("ranking", words)
}

impl Ranking {
    fn from_words(label: &str, words: Vec<String>) -> Ranking {
        let rank_by_word = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i + 1))
            .collect();
        Ranking {
            label: label.to_string(),
            words,
            rank_by_word,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Ranking {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// 1-based rank of `word`, if ranked.
    pub fn rank_of(&self, word: &str) -> Option<usize> {
        self.rank_by_word.get(word).copied()
    }

    /// Word at 1-based `rank`, if within range.
    pub fn word_at(&self, rank: usize) -> Option<&str> {
        if rank == 0 {
            return None;
        }
        self.words.get(rank - 1).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.words.iter().enumerate().map(|(i, w)| (w.as_str(), i + 1))
    }

    /// Writes `word<TAB>rank` lines in rank order.
    pub fn to_tsv<W: Write>(&self, mut writer: W) -> Result<(), LexicalError> {
        for (word, rank) in self.iter() {
            writeln!(writer, "{word}\t{rank}")?;
        }
        Ok(())
    }

    /// Reads a ranking written by [`to_tsv`](Self::to_tsv). Ranks must be
    /// exactly 1..N in order and words unique.
    pub fn from_tsv<R: Read>(reader: R, label: &str) -> Result<Ranking, LexicalError> {
        let reader = BufReader::new(reader);
        let mut words = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |message: String| LexicalError::MalformedCsv {
                line: line_no,
                message,
            };
            let (word, rank) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected word<TAB>rank".to_string()))?;
            let rank: usize = rank
                .trim()
                .parse()
                .map_err(|_| malformed(format!("unparseable rank '{rank}'")))?;
            if rank != words.len() + 1 {
                return Err(malformed(format!(
                    "rank {rank} out of order, expected {}",
                    words.len() + 1
                )));
            }
            words.push(word.to_string());
        }
        let ranking = Ranking::from_words(label, words);
        if ranking.rank_by_word.len() != ranking.words.len() {
            return Err(LexicalError::MalformedCsv {
                line: 0,
                message: "duplicate word in ranking".to_string(),
            });
        }
        Ok(ranking)
    }
}
