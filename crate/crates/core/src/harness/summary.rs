use std::collections::BTreeMap;

use serde::Serialize;

use super::run::TrialRecord;
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`, clamped to
/// `[0, 1]`.
pub fn wilson_interval(successes: usize, trials: usize) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::param(format!("bad counts {successes}/{trials}")));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).clamp(0.0, 1.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).clamp(0.0, 1.0) };
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub point: usize,
    pub coords: Vec<f64>,
    pub trials: usize,
    /// Trials that ended in an error.
    pub failed: usize,
    pub successes: usize,
    /// Success rate over trials with a success flag; `None` if there are
    /// none.
    pub rate: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Per-point success rates with Wilson 95% intervals, ordered by point.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<PointSummary>> {
    if records.is_empty() {
        return Err(Error::param("nothing to summarize"));
    }
    let mut by_point: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        by_point.entry(r.point).or_default().push(r);
    }
    by_point
        .into_iter()
        .map(|(point, recs)| {
            let flagged: Vec<bool> = recs.iter().filter_map(|r| r.success).collect();
            let successes = flagged.iter().filter(|&&s| s).count();
            let (rate, lower, upper) = if flagged.is_empty() {
                (None, None, None)
            } else {
                let (lo, hi) = wilson_interval(successes, flagged.len())?;
                (Some(successes as f64 / flagged.len() as f64), Some(lo), Some(hi))
            };
            Ok(PointSummary {
                point,
                coords: recs[0].coords.clone(),
                trials: recs.len(),
                failed: recs.iter().filter(|r| r.error.is_some()).count(),
                successes,
                rate,
                lower,
                upper,
            })
        })
        .collect()
}
