//! Baseline calibration of yearly estimate series.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use super::ImpactError;

/// A yearly series re-zeroed against baseline years.
///
/// `calibrated[y] = raw[y] − mean(raw over baseline_years)`, so the
/// calibrated values average to 0 over the baseline and year-to-year
/// differences are untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedSeries {
    pub raw: BTreeMap<i32, f64>,
    pub baseline_years: BTreeSet<i32>,
    pub calibrated: BTreeMap<i32, f64>,
}

/// Subtracts the baseline-year mean from every year's value. Every baseline
/// year must be present in the series.
pub fn calibrate(
    series: &BTreeMap<i32, f64>,
    baseline_years: &BTreeSet<i32>,
) -> Result<CalibratedSeries, ImpactError> {
    if baseline_years.is_empty() {
        return Err(ImpactError::EmptyBaseline);
    }
    let mut baseline_sum = 0.0;
    for year in baseline_years {
        match series.get(year) {
            Some(v) => baseline_sum += v,
            None => return Err(ImpactError::MissingBaselineYear(*year)),
        }
    }
    let offset = baseline_sum / baseline_years.len() as f64;
    let calibrated = series.iter().map(|(y, v)| (*y, v - offset)).collect();
    Ok(CalibratedSeries {
        raw: series.clone(),
        baseline_years: baseline_years.clone(),
        calibrated,
    })
}

impl CalibratedSeries {
    /// Writes `year,eta_raw,eta_calibrated` rows in year order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ImpactError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["year", "eta_raw", "eta_calibrated"])
            .map_err(|e| ImpactError::Io(std::io::Error::other(e)))?;
        for (year, raw) in &self.raw {
            out.write_record([
                year.to_string(),
                raw.to_string(),
                self.calibrated[year].to_string(),
            ])
            .map_err(|e| ImpactError::Io(std::io::Error::other(e)))?;
        }
        out.flush().map_err(ImpactError::Io)?;
        Ok(())
    }
}
