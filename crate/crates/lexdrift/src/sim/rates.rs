//! Per-word frequency change rates between a corpus and its revised twin.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::SimError;
use crate::lexical::FrequencyTable;

/// r̂ per word, with the supporting frequencies.
///
/// A word's rate is (f(S2) − f(S1)) / f(S1), defined only where f(S1) > 0;
/// words introduced by the revision are excluded and listed separately.
/// Since frequencies are nonnegative, every rate is ≥ −1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChangeRates {
    rates: BTreeMap<String, f64>,
    support: BTreeMap<String, (f64, f64)>,
    excluded: Vec<String>,
}

/// Computes change rates from the original and revised frequency tables.
/// Both must be normalized to a common total for rates to be comparable
/// across words.
pub fn change_rates(table_s1: &FrequencyTable, table_s2: &FrequencyTable) -> ChangeRates {
    let mut rates = BTreeMap::new();
    let mut support = BTreeMap::new();
    let mut excluded = Vec::new();

    for (word, &f1) in table_s1.counts() {
        let f2 = table_s2.get(word);
        if f1 > 0.0 {
            rates.insert(word.clone(), (f2 - f1) / f1);
            support.insert(word.clone(), (f1, f2));
        } else if f2 > 0.0 {
            excluded.push(word.clone());
        }
    }
    for (word, &f2) in table_s2.counts() {
        if f2 > 0.0 && table_s1.get(word) == 0.0 && !table_s1.contains(word) {
            excluded.push(word.clone());
        }
    }
    excluded.sort();
    excluded.dedup();

    ChangeRates {
        rates,
        support,
        excluded,
    }
}

impl ChangeRates {
    pub fn get(&self, word: &str) -> Option<f64> {
        self.rates.get(word).copied()
    }

    /// (f(S1), f(S2)) for a word with a defined rate.
    pub fn support(&self, word: &str) -> Option<(f64, f64)> {
        self.support.get(word).copied()
    }

    pub fn rates(&self) -> &BTreeMap<String, f64> {
        &self.rates
    }

    /// Words present only in the revised table, which have no defined rate.
    pub fn excluded(&self) -> &[String] {
        &self.excluded
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Writes `word,freq_original,freq_revised,rate` rows in word order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), SimError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["word", "freq_original", "freq_revised", "rate"])
            .map_err(csv_io)?;
        for (word, rate) in &self.rates {
            let (f1, f2) = self.support[word];
            out.write_record([word.as_str(), &f1.to_string(), &f2.to_string(), &rate.to_string()])
                .map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes the excluded words as `word` rows.
    pub fn write_excluded_csv<W: Write>(&self, writer: W) -> Result<(), SimError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["word"]).map_err(csv_io)?;
        for word in &self.excluded {
            out.write_record([word.as_str()]).map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads rates written by [`write_csv`](Self::write_csv), checking each
    /// row's rate against its frequencies.
    pub fn from_csv<R: Read>(reader: R) -> Result<ChangeRates, SimError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        {
            let headers = rdr.headers().map_err(|e| SimError::MalformedCsv {
                line: 1,
                message: e.to_string(),
            })?;
            if headers.iter().collect::<Vec<_>>() != ["word", "freq_original", "freq_revised", "rate"] {
                return Err(SimError::MalformedCsv {
                    line: 1,
                    message: format!("expected header word,freq_original,freq_revised,rate, got {headers:?}"),
                });
            }
        }

        let mut rates = BTreeMap::new();
        let mut support = BTreeMap::new();
        for (idx, record) in rdr.records().enumerate() {
            let line = idx + 2;
            let malformed = |message: String| SimError::MalformedCsv { line, message };
            let record = record.map_err(|e| malformed(e.to_string()))?;
            if record.len() != 4 {
                return Err(malformed(format!("expected 4 fields, got {}", record.len())));
            }
            let word = record[0].to_string();
            let parse = |i: usize| -> Result<f64, SimError> {
                record[i]
                    .parse()
                    .map_err(|_| malformed(format!("unparseable number '{}'", &record[i])))
            };
            let f1 = parse(1)?;
            let f2 = parse(2)?;
            let rate = parse(3)?;
            if !(f1 > 0.0) {
                return Err(malformed(format!("freq_original must be > 0, got {f1}")));
            }
            let expected = (f2 - f1) / f1;
            if (rate - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                return Err(malformed(format!(
                    "rate {rate} inconsistent with frequencies (expected {expected})"
                )));
            }
            if rates.insert(word.clone(), rate).is_some() {
                return Err(malformed(format!("duplicate word '{word}'")));
            }
            support.insert(word, (f1, f2));
        }
        Ok(ChangeRates {
            rates,
            support,
            excluded: Vec::new(),
        })
    }
}

fn csv_io(e: csv::Error) -> SimError {
    SimError::Io(std::io::Error::other(e))
}
