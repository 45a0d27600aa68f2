//! Bin statistics over control ratios and the target z-score.

use std::io::Write;

use super::{ControlError, RatioPoint};

/// Mean and sample standard deviation of the control ratios in one bin.
#[derive(Debug, Clone, PartialEq)]
pub struct BinStats {
    pub bin_lo: i64,
    pub bin_hi: i64,
    pub mean: f64,
    /// Sample convention (denominator N−1); 0 for a single-point bin.
    pub std: f64,
    pub n: usize,
    /// Set when n = 1, where the sample std is undefined and reported as 0.
    pub single_point: bool,
}

/// Groups control points (shift ≠ 0) into consecutive chunks of at most
/// `bin_width` shifts, ordered by shift, and computes per-bin mean and
/// sample std of the ratios. The default width of 50 over the full −250..250
/// sweep yields 10 bins of 50 control points each.
pub fn bin_stats(sweep: &[RatioPoint], bin_width: u32) -> Result<Vec<BinStats>, ControlError> {
    if bin_width == 0 {
        return Err(ControlError::ZeroBinWidth);
    }
    if sweep.is_empty() {
        return Err(ControlError::EmptySweep);
    }
    let mut controls: Vec<&RatioPoint> = sweep.iter().filter(|p| p.shift != 0).collect();
    if controls.is_empty() {
        return Err(ControlError::NoControlPoints);
    }
    controls.sort_by_key(|p| p.shift);

    let bins = controls
        .chunks(bin_width as usize)
        .map(|chunk| {
            let n = chunk.len();
            let mean = chunk.iter().map(|p| p.ratio).sum::<f64>() / n as f64;
            let std = if n > 1 {
                let ss: f64 = chunk.iter().map(|p| (p.ratio - mean).powi(2)).sum();
                (ss / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            BinStats {
                bin_lo: chunk[0].shift,
                bin_hi: chunk[n - 1].shift,
                mean,
                std,
                n,
                single_point: n == 1,
            }
        })
        .collect();
    Ok(bins)
}

/// The target statistic: how many control standard deviations the shift-0
/// ratio sits above its bin's mean.
///
/// Shift 0 belongs to no control bin, so "its bin" is the nearest one by
/// shift distance; a tie between the two flanking bins resolves to the
/// positive side.
pub fn target_zscore(sweep: &[RatioPoint], bins: &[BinStats]) -> Result<f64, ControlError> {
    let target = sweep
        .iter()
        .find(|p| p.shift == 0)
        .ok_or(ControlError::MissingTargetPoint)?;
    if bins.is_empty() {
        return Err(ControlError::NoBins);
    }

    let distance = |b: &BinStats| -> (i64, i64) {
        // Distance from shift 0 to the bin interval; tiebreak prefers the
        // bin on the positive side (smaller second component).
        let d = if b.bin_lo > 0 {
            b.bin_lo
        } else if b.bin_hi < 0 {
            -b.bin_hi
        } else {
            0
        };
        (d, if b.bin_lo > 0 { 0 } else { 1 })
    };
    let bin = bins
        .iter()
        .min_by_key(|b| distance(b))
        .expect("bins nonempty");

    if bin.std <= 0.0 || !bin.std.is_finite() {
        return Err(ControlError::DegenerateControlBin);
    }
    Ok((target.ratio - bin.mean) / bin.std)
}

/// Writes `bin_lo,bin_hi,mean,std,n` rows in bin order.
pub fn write_bins_csv<W: Write>(bins: &[BinStats], writer: W) -> Result<(), ControlError> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["bin_lo", "bin_hi", "mean", "std", "n"])
        .map_err(|e| ControlError::Io(std::io::Error::other(e)))?;
    for b in bins {
        out.write_record([
            b.bin_lo.to_string(),
            b.bin_hi.to_string(),
            b.mean.to_string(),
            b.std.to_string(),
            b.n.to_string(),
        ])
        .map_err(|e| ControlError::Io(std::io::Error::other(e)))?;
    }
    out.flush().map_err(ControlError::Io)?;
    Ok(())
}
