//! Closed-form OLS solution for the mixture weight.

use std::collections::{BTreeMap, BTreeSet};

use super::{EstimationInputs, ImpactError};

/// Solves min_eta Σ_i (f_d_i − f*_i − eta f*_i r_i)² over `words`:
///
/// ```text
/// eta = Σ (f_d − f*) f* r  /  Σ (f* r)²
/// ```
///
/// Returns eta and the per-word residuals delta_i = (f_d − f*) − eta f* r.
/// Every word must have f* > 0 and a defined rate; a regressor that is zero
/// on all words leaves eta undefined.
pub fn estimate_eta(
    inputs: &EstimationInputs,
    words: &BTreeSet<String>,
) -> Result<(f64, BTreeMap<String, f64>), ImpactError> {
    if words.is_empty() {
        return Err(ImpactError::EmptyWordSet);
    }

    let mut numerator = 0.0;
    let mut denominator = 0.0;
    let mut rows: Vec<(&String, f64, f64)> = Vec::with_capacity(words.len());
    for word in words {
        let f_star = inputs.f_star().get(word);
        let rate = inputs.rates().get(word);
        let (f_star, rate) = match (f_star > 0.0, rate) {
            (true, Some(rate)) => (f_star, rate),
            _ => return Err(ImpactError::MissingWordData(word.clone())),
        };
        let deviation = inputs.f_d().get(word) - f_star;
        let regressor = f_star * rate;
        numerator += deviation * regressor;
        denominator += regressor * regressor;
        rows.push((word, deviation, regressor));
    }

    if denominator == 0.0 {
        return Err(ImpactError::DegenerateRegressor);
    }
    let eta = numerator / denominator;

    let residuals = rows
        .into_iter()
        .map(|(word, deviation, regressor)| (word.clone(), deviation - eta * regressor))
        .collect();
    Ok((eta, residuals))
}
