//! Word-frequency tables: mergeable, rescalable, CSV-serializable.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::LexicalError;

/// Reserved word marking the trailing total row in CSV exports.
const TOTAL_ROW: &str = "__total__";

/// Counts per canonical word plus their sum.
///
/// Counts are reals, not integers: normalization rescales tables so that
/// corpora of different sizes are comparable, and rescaled tables share this
/// type with raw ones.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrequencyTable {
    counts: BTreeMap<String, f64>,
    total: f64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from raw counts, rejecting negative or non-finite
    /// entries. The total is their sum.
    pub fn from_counts(counts: BTreeMap<String, f64>) -> Result<Self, LexicalError> {
        for (word, &count) in &counts {
            if !count.is_finite() {
                return Err(LexicalError::NonFiniteCount { word: word.clone() });
            }
            if count < 0.0 {
                return Err(LexicalError::NegativeCount {
                    word: word.clone(),
                    count,
                });
            }
        }
        let total = counts.values().sum();
        Ok(FrequencyTable { counts, total })
    }

    /// Convenience constructor for literal tables.
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Result<Self, LexicalError> {
        let mut counts = BTreeMap::new();
        for (word, count) in pairs {
            *counts.entry(word.to_string()).or_insert(0.0) += count;
        }
        Self::from_counts(counts)
    }

    /// Count for `word`, 0 when absent.
    pub fn get(&self, word: &str) -> f64 {
        self.counts.get(word).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.counts.contains_key(word)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &BTreeMap<String, f64> {
        &self.counts
    }

    /// Pointwise sum: counts add per word, totals add. The empty slice gives
    /// the empty table.
    pub fn merge(tables: &[FrequencyTable]) -> FrequencyTable {
        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
        let mut total = 0.0;
        for table in tables {
            for (word, count) in &table.counts {
                *counts.entry(word.clone()).or_insert(0.0) += count;
            }
            total += table.total;
        }
        FrequencyTable { counts, total }
    }

    /// Rescales every count by `reference_total / self.total()` so the new
    /// total equals `reference_total`. Ratios between counts are preserved.
    pub fn normalize_to_total(&self, reference_total: f64) -> Result<FrequencyTable, LexicalError> {
        if !(reference_total > 0.0) || !reference_total.is_finite() {
            return Err(LexicalError::NonpositiveReference(reference_total));
        }
        if self.total == 0.0 {
            return Err(LexicalError::NormalizeEmptyTable);
        }
        let scale = reference_total / self.total;
        let counts = self
            .counts
            .iter()
            .map(|(w, c)| (w.clone(), c * scale))
            .collect();
        Ok(FrequencyTable {
            counts,
            total: reference_total,
        })
    }

    /// Writes `word,count` rows in word order with a trailing
    /// `__total__,<total>` row.
    pub fn to_csv<W: Write>(&self, writer: W) -> Result<(), LexicalError> {
        if self.counts.contains_key(TOTAL_ROW) {
            return Err(LexicalError::ReservedWord);
        }
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["word", "count"]).map_err(csv_io)?;
        for (word, count) in &self.counts {
            out.write_record([word.as_str(), &count.to_string()])
                .map_err(csv_io)?;
        }
        out.write_record([TOTAL_ROW, &self.total.to_string()])
            .map_err(csv_io)?;
        out.flush()?;
        Ok(())
    }

    /// Reads a table written by [`to_csv`](Self::to_csv). The trailing total
    /// row is optional; when present it must match the sum of counts to
    /// relative tolerance 1e-9.
    pub fn from_csv<R: Read>(reader: R) -> Result<FrequencyTable, LexicalError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        {
            let headers = rdr.headers().map_err(|e| LexicalError::MalformedCsv {
                line: 1,
                message: e.to_string(),
            })?;
            if headers.iter().collect::<Vec<_>>() != ["word", "count"] {
                return Err(LexicalError::MalformedCsv {
                    line: 1,
                    message: format!("expected header word,count, got {headers:?}"),
                });
            }
        }

        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
        let mut stated_total: Option<f64> = None;
        for (idx, record) in rdr.records().enumerate() {
            let line = idx + 2;
            let record = record.map_err(|e| LexicalError::MalformedCsv {
                line,
                message: e.to_string(),
            })?;
            if stated_total.is_some() {
                return Err(LexicalError::MalformedCsv {
                    line,
                    message: "rows after the total row".to_string(),
                });
            }
            if record.len() != 2 {
                return Err(LexicalError::MalformedCsv {
                    line,
                    message: format!("expected 2 fields, got {}", record.len()),
                });
            }
            let word = record[0].to_string();
            let count: f64 = record[1].parse().map_err(|_| LexicalError::MalformedCsv {
                line,
                message: format!("unparseable count '{}'", &record[1]),
            })?;
            if word == TOTAL_ROW {
                stated_total = Some(count);
                continue;
            }
            if counts.insert(word.clone(), count).is_some() {
                return Err(LexicalError::MalformedCsv {
                    line,
                    message: format!("duplicate word '{word}'"),
                });
            }
        }

        let table = FrequencyTable::from_counts(counts)?;
        if let Some(stated) = stated_total {
            let computed = table.total;
            if (stated - computed).abs() > 1e-9 * computed.abs().max(1.0) {
                return Err(LexicalError::InconsistentTotal { stated, computed });
            }
        }
        Ok(table)
    }
}

fn csv_io(e: csv::Error) -> LexicalError {
    LexicalError::Io(std::io::Error::other(e))
}
