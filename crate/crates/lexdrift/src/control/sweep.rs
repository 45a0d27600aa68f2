//! Ratio sweeps across shifted control groups.

use std::io::Write;

use rayon::prelude::*;

use super::{frequency_ratio, group_frequency, shifted_group, ControlError, WordGroup};
use crate::lexical::{FrequencyTable, Ranking};

/// One shift's group frequencies and their ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioPoint {
    pub shift: i64,
    pub group_freq_s: f64,
    pub group_freq_sprime: f64,
    pub ratio: f64,
}

/// A shift that produced no ratio, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedShift {
    pub shift: i64,
    pub reason: String,
}

/// Sweep result: points ordered by shift plus the skip report.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSweep {
    pub points: Vec<RatioPoint>,
    pub skipped: Vec<SkippedShift>,
}

impl RatioSweep {
    /// The shift-0 point, when the target group itself produced a ratio.
    pub fn target_point(&self) -> Option<&RatioPoint> {
        self.points.iter().find(|p| p.shift == 0)
    }

    /// Writes `shift,freq_s,freq_sprime,ratio` rows in shift order.
    pub fn write_points_csv<W: Write>(&self, writer: W) -> Result<(), ControlError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["shift", "freq_s", "freq_sprime", "ratio"])
            .map_err(csv_io)?;
        for p in &self.points {
            out.write_record([
                p.shift.to_string(),
                p.group_freq_s.to_string(),
                p.group_freq_sprime.to_string(),
                p.ratio.to_string(),
            ])
            .map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes `shift,reason` rows in shift order.
    pub fn write_skips_csv<W: Write>(&self, writer: W) -> Result<(), ControlError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["shift", "reason"]).map_err(csv_io)?;
        for s in &self.skipped {
            out.write_record([s.shift.to_string(), s.reason.clone()])
                .map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_io(e: csv::Error) -> ControlError {
    ControlError::Io(std::io::Error::other(e))
}

/// Computes R_n(S, S') for every shift in [shift_lo, shift_hi].
///
/// Shifts whose indices exit the ranking, or whose group has zero frequency
/// in S', are skipped and recorded rather than clamped: clamping would
/// duplicate words across control groups and bias the bin statistics.
/// Shifts evaluate in parallel; output order is by shift regardless.
pub fn sweep_ratios(
    target: &WordGroup,
    shift_lo: i64,
    shift_hi: i64,
    ranking: &Ranking,
    table_s: &FrequencyTable,
    table_sprime: &FrequencyTable,
) -> Result<RatioSweep, ControlError> {
    if shift_lo > 0 || shift_hi < 0 {
        return Err(ControlError::BadShiftRange {
            lo: shift_lo,
            hi: shift_hi,
        });
    }

    let results: Vec<Result<RatioPoint, SkippedShift>> = (shift_lo..=shift_hi)
        .into_par_iter()
        .map(|shift| {
            let group = shifted_group(target, shift, ranking).map_err(|e| SkippedShift {
                shift,
                reason: e.to_string(),
            })?;
            let freq_s = group_frequency(&group, table_s);
            let freq_sprime = group_frequency(&group, table_sprime);
            let ratio = frequency_ratio(&group, table_s, table_sprime).map_err(|e| SkippedShift {
                shift,
                reason: e.to_string(),
            })?;
            Ok(RatioPoint {
                shift,
                group_freq_s: freq_s,
                group_freq_sprime: freq_sprime,
                ratio,
            })
        })
        .collect();

    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for result in results {
        match result {
            Ok(point) => points.push(point),
            Err(skip) => skipped.push(skip),
        }
    }
    Ok(RatioSweep { points, skipped })
}
