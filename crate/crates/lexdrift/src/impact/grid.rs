//! Criteria-grid sweep: one estimate per (baseline threshold, rate
//! threshold) cell, with the spread across cells as the error bar.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{estimate_eta, filter_words, EstimationInputs, ImpactError};

/// How a grid value converts to a baseline-frequency threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdUnit {
    /// Grid value X admits relative frequency 1/X: the count threshold is
    /// total / X.
    InverseRelative,
    /// Grid value is a count threshold in the table's own units.
    Count,
}

/// Whether the baseline threshold is a floor or a ceiling on f*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdDirection {
    Floor,
    Ceiling,
}

/// Baseline-frequency grid axis.
///
/// The default reproduces the reference criteria: inverse relative
/// frequencies 30, 40, 50, 60, 70, 80, 100, 150, 200, 500 used as floors
/// (value X admits words with relative frequency at least 1/X).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqGrid {
    pub values: Vec<f64>,
    pub unit: ThresholdUnit,
    pub direction: ThresholdDirection,
}

impl Default for FreqGrid {
    fn default() -> Self {
        FreqGrid {
            values: vec![30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 100.0, 150.0, 200.0, 500.0],
            unit: ThresholdUnit::InverseRelative,
            direction: ThresholdDirection::Floor,
        }
    }
}

/// The default rate-threshold axis: floors 0.4, 0.5, 0.6, 0.7 on r̂.
pub fn default_rate_grid() -> Vec<f64> {
    vec![0.4, 0.5, 0.6, 0.7]
}

/// One grid cell's estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CellEstimate {
    /// The f* grid value as given (not converted to count units).
    pub min_f: f64,
    pub min_r: f64,
    pub eta: f64,
    pub words_used: usize,
}

/// A grid cell that produced no estimate, and why.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub min_f: f64,
    pub min_r: f64,
    pub reason: String,
}

/// Grid sweep result: per-cell estimates, their mean and sample std, the
/// central cell's residuals, and the skipped cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactEstimate {
    pub eta_by_criteria: Vec<CellEstimate>,
    pub mean_eta: f64,
    /// Sample std across cells; 0 for a single cell.
    pub std_eta: f64,
    /// Residuals delta_i for the central cell (the middle entry of
    /// `eta_by_criteria`, lower middle for even counts).
    pub residuals: BTreeMap<String, f64>,
    pub central_cell: (f64, f64),
    pub skipped: Vec<SkippedCell>,
}

/// Runs [`estimate_eta`] for every (grid_f x grid_r) cell.
///
/// Cells whose selection is empty (or degenerate) are recorded as skipped;
/// the mean and sample std summarize the cells that produced an estimate.
/// Cell order is row-major (f outer, r inner) and deterministic.
pub fn sweep_estimates(
    inputs: &EstimationInputs,
    grid_f: &FreqGrid,
    grid_r: &[f64],
    allowlist: &BTreeSet<String>,
) -> Result<ImpactEstimate, ImpactError> {
    if grid_f.values.is_empty() || grid_r.is_empty() {
        return Err(ImpactError::EmptyGrid);
    }
    for &v in &grid_f.values {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ImpactError::NonpositiveGridValue(v));
        }
    }
    for &r in grid_r {
        if r.is_nan() {
            return Err(ImpactError::NanThreshold);
        }
    }

    let total = inputs.f_star().total();
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    let mut residuals_by_cell: Vec<BTreeMap<String, f64>> = Vec::new();

    for &f_value in &grid_f.values {
        let threshold = match grid_f.unit {
            ThresholdUnit::InverseRelative => total / f_value,
            ThresholdUnit::Count => f_value,
        };
        for &min_r in grid_r {
            let words = filter_words(
                inputs.f_star(),
                inputs.rates(),
                allowlist,
                threshold,
                grid_f.direction,
                min_r,
            );
            if words.is_empty() {
                skipped.push(SkippedCell {
                    min_f: f_value,
                    min_r,
                    reason: "no words satisfy selection".to_string(),
                });
                continue;
            }
            match estimate_eta(inputs, &words) {
                Ok((eta, residuals)) => {
                    cells.push(CellEstimate {
                        min_f: f_value,
                        min_r,
                        eta,
                        words_used: words.len(),
                    });
                    residuals_by_cell.push(residuals);
                }
                Err(e) => skipped.push(SkippedCell {
                    min_f: f_value,
                    min_r,
                    reason: e.to_string(),
                }),
            }
        }
    }

    if cells.is_empty() {
        return Err(ImpactError::AllCellsSkipped);
    }

    let n = cells.len();
    let mean_eta = cells.iter().map(|c| c.eta).sum::<f64>() / n as f64;
    let std_eta = if n > 1 {
        let ss: f64 = cells.iter().map(|c| (c.eta - mean_eta).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let central = (n - 1) / 2;
    let residuals = residuals_by_cell.swap_remove(central);
    let central_cell = (cells[central].min_f, cells[central].min_r);

    Ok(ImpactEstimate {
        eta_by_criteria: cells,
        mean_eta,
        std_eta,
        residuals,
        central_cell,
        skipped,
    })
}

impl ImpactEstimate {
    /// Writes `min_f,min_r,eta,words_used` rows in cell order, then the
    /// summary row `mean,std,<mean_eta>,<std_eta>`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ImpactError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["min_f", "min_r", "eta", "words_used"])
            .map_err(csv_io)?;
        for c in &self.eta_by_criteria {
            out.write_record([
                c.min_f.to_string(),
                c.min_r.to_string(),
                c.eta.to_string(),
                c.words_used.to_string(),
            ])
            .map_err(csv_io)?;
        }
        out.write_record([
            "mean".to_string(),
            "std".to_string(),
            self.mean_eta.to_string(),
            self.std_eta.to_string(),
        ])
        .map_err(csv_io)?;
        out.flush()?;
        Ok(())
    }

    /// Writes `min_f,min_r,reason` rows for the skipped cells.
    pub fn write_skipped_csv<W: Write>(&self, writer: W) -> Result<(), ImpactError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["min_f", "min_r", "reason"]).map_err(csv_io)?;
        for s in &self.skipped {
            out.write_record([s.min_f.to_string(), s.min_r.to_string(), s.reason.clone()])
                .map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes `word,residual` rows for the central cell.
    pub fn write_residuals_csv<W: Write>(&self, writer: W) -> Result<(), ImpactError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["word", "residual"]).map_err(csv_io)?;
        for (word, delta) in &self.residuals {
            out.write_record([word.as_str(), &delta.to_string()])
                .map_err(csv_io)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Reads an estimate CSV written by [`ImpactEstimate::write_csv`], checking
/// the summary row against a recomputation from the cells.
pub fn read_estimate_csv<R: Read>(reader: R) -> Result<(Vec<CellEstimate>, f64, f64), ImpactError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    {
        let headers = rdr.headers().map_err(|e| ImpactError::MalformedCsv {
            line: 1,
            message: e.to_string(),
        })?;
        if headers.iter().collect::<Vec<_>>() != ["min_f", "min_r", "eta", "words_used"] {
            return Err(ImpactError::MalformedCsv {
                line: 1,
                message: format!("expected header min_f,min_r,eta,words_used, got {headers:?}"),
            });
        }
    }

    let mut cells = Vec::new();
    let mut summary: Option<(f64, f64)> = None;
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 2;
        let malformed = |message: String| ImpactError::MalformedCsv { line, message };
        let record = record.map_err(|e| malformed(e.to_string()))?;
        if record.len() != 4 {
            return Err(malformed(format!("expected 4 fields, got {}", record.len())));
        }
        if summary.is_some() {
            return Err(malformed("rows after the summary row".to_string()));
        }
        if &record[0] == "mean" {
            let mean = record[2]
                .parse()
                .map_err(|_| malformed(format!("unparseable mean '{}'", &record[2])))?;
            let std = record[3]
                .parse()
                .map_err(|_| malformed(format!("unparseable std '{}'", &record[3])))?;
            summary = Some((mean, std));
            continue;
        }
        let parse = |i: usize| -> Result<f64, ImpactError> {
            record[i]
                .parse()
                .map_err(|_| ImpactError::MalformedCsv {
                    line,
                    message: format!("unparseable number '{}'", &record[i]),
                })
        };
        cells.push(CellEstimate {
            min_f: parse(0)?,
            min_r: parse(1)?,
            eta: parse(2)?,
            words_used: record[3].parse().map_err(|_| ImpactError::MalformedCsv {
                line,
                message: format!("unparseable words_used '{}'", &record[3]),
            })?,
        });
    }

    let (mean, std) = summary.ok_or(ImpactError::MalformedCsv {
        line: 0,
        message: "missing summary row".to_string(),
    })?;
    if cells.is_empty() {
        return Err(ImpactError::MalformedCsv {
            line: 0,
            message: "no estimate cells".to_string(),
        });
    }
    let n = cells.len();
    let mean_check = cells.iter().map(|c| c.eta).sum::<f64>() / n as f64;
    let std_check = if n > 1 {
        let ss: f64 = cells.iter().map(|c| (c.eta - mean_check).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
    if !close(mean, mean_check) || !close(std, std_check) {
        return Err(ImpactError::MalformedCsv {
            line: 0,
            message: format!(
                "summary row ({mean}, {std}) inconsistent with cells ({mean_check}, {std_check})"
            ),
        });
    }
    Ok((cells, mean, std))
}

fn csv_io(e: csv::Error) -> ImpactError {
    ImpactError::Io(std::io::Error::other(e))
}
