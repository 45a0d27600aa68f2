//! The mixture-model impact estimate.
//!
//! Model: an observed corpus is a mixture of untouched text and text passed
//! through an LLM. For each word, the observed frequency decomposes as
//!
//! ```text
//! f_d = f* + eta * f* * r + delta
//! ```
//!
//! where f* is the counterfactual baseline frequency, r the word's LLM
//! change rate, eta the mixture weight, and delta noise. [`estimate_eta`]
//! solves for eta by ordinary least squares over a word set chosen by
//! [`select_words`]; [`sweep_estimates`] repeats the estimate across a grid
//! of selection criteria and reports the spread; [`calibrate`] re-zeroes a
//! yearly series against pre-LLM baseline years.

mod calibrate;
mod grid;
mod ols;

pub use calibrate::{calibrate, CalibratedSeries};
pub use grid::{
    default_rate_grid, read_estimate_csv, sweep_estimates, CellEstimate, FreqGrid, ImpactEstimate,
    SkippedCell, ThresholdDirection, ThresholdUnit,
};
pub use ols::estimate_eta;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lexical::FrequencyTable;
use crate::sim::ChangeRates;

#[derive(Debug, Error)]
pub enum ImpactError {
    #[error("no words satisfy selection")]
    NoWordsSatisfySelection,
    #[error("degenerate regressor")]
    DegenerateRegressor,
    #[error("estimation requires a nonempty word set")]
    EmptyWordSet,
    #[error("word '{0}' lacks a baseline frequency or change rate")]
    MissingWordData(String),
    #[error("selection threshold is NaN")]
    NanThreshold,
    #[error("observed and baseline tables are normalized differently ({observed} vs {baseline})")]
    MismatchedTotals { observed: f64, baseline: f64 },
    #[error("criteria grid is empty")]
    EmptyGrid,
    #[error("grid threshold {0} must be positive")]
    NonpositiveGridValue(f64),
    #[error("all grid cells skipped")]
    AllCellsSkipped,
    #[error("baseline year {0} missing from series")]
    MissingBaselineYear(i32),
    #[error("baseline year set is empty")]
    EmptyBaseline,
    #[error("line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Word-selection criteria for one estimate.
///
/// `min_baseline_freq` is a floor on f* in the tables' count units;
/// `min_change_rate` a floor on r̂. An empty allowlist means no allowlist
/// filter. Both floors may be −∞ to disable them.
#[derive(Debug, Clone, PartialEq)]
pub struct WordSelection {
    pub allowlist: BTreeSet<String>,
    pub min_baseline_freq: f64,
    pub min_change_rate: f64,
}

impl WordSelection {
    pub fn new(
        allowlist: BTreeSet<String>,
        min_baseline_freq: f64,
        min_change_rate: f64,
    ) -> Result<Self, ImpactError> {
        if min_baseline_freq.is_nan() || min_change_rate.is_nan() {
            return Err(ImpactError::NanThreshold);
        }
        Ok(WordSelection {
            allowlist,
            min_baseline_freq,
            min_change_rate,
        })
    }
}

/// Words eligible for estimation: in the allowlist (when nonempty), with
/// f* > 0 meeting the baseline floor and a defined r̂ meeting the rate floor.
pub fn select_words(
    f_star: &FrequencyTable,
    rates: &ChangeRates,
    sel: &WordSelection,
) -> Result<BTreeSet<String>, ImpactError> {
    if sel.min_baseline_freq.is_nan() || sel.min_change_rate.is_nan() {
        return Err(ImpactError::NanThreshold);
    }
    let words = filter_words(
        f_star,
        rates,
        &sel.allowlist,
        sel.min_baseline_freq,
        ThresholdDirection::Floor,
        sel.min_change_rate,
    );
    if words.is_empty() {
        return Err(ImpactError::NoWordsSatisfySelection);
    }
    Ok(words)
}

/// Shared filter for [`select_words`] and the grid sweep, which may invert
/// the baseline threshold.
pub(crate) fn filter_words(
    f_star: &FrequencyTable,
    rates: &ChangeRates,
    allowlist: &BTreeSet<String>,
    baseline_threshold: f64,
    direction: ThresholdDirection,
    min_change_rate: f64,
) -> BTreeSet<String> {
    f_star
        .counts()
        .iter()
        .filter(|(word, &f)| {
            if f <= 0.0 {
                return false;
            }
            if !allowlist.is_empty() && !allowlist.contains(*word) {
                return false;
            }
            let passes_baseline = match direction {
                ThresholdDirection::Floor => f >= baseline_threshold,
                ThresholdDirection::Ceiling => f <= baseline_threshold,
            };
            if !passes_baseline {
                return false;
            }
            match rates.get(word) {
                Some(r) => r >= min_change_rate,
                None => false,
            }
        })
        .map(|(word, _)| word.clone())
        .collect()
}

/// Observed table, counterfactual baseline, and change rates, all sharing
/// one normalization total.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationInputs {
    f_d: FrequencyTable,
    f_star: FrequencyTable,
    rates: ChangeRates,
}

impl EstimationInputs {
    /// Validates that observed and baseline totals agree (relative 1e-6);
    /// rates are scale-free so no total applies to them.
    pub fn new(
        f_d: FrequencyTable,
        f_star: FrequencyTable,
        rates: ChangeRates,
    ) -> Result<Self, ImpactError> {
        let (observed, baseline) = (f_d.total(), f_star.total());
        if (observed - baseline).abs() > 1e-6 * baseline.abs().max(1.0) {
            return Err(ImpactError::MismatchedTotals { observed, baseline });
        }
        Ok(EstimationInputs { f_d, f_star, rates })
    }

    pub fn f_d(&self) -> &FrequencyTable {
        &self.f_d
    }

    pub fn f_star(&self) -> &FrequencyTable {
        &self.f_star
    }

    pub fn rates(&self) -> &ChangeRates {
        &self.rates
    }
}
