//! Return intervals between successive threshold exceedances.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::NormalizedVolatilitySeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("threshold must be positive and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("series is empty")]
    EmptySeries,
    #[error("need at least 2 exceedances to form an interval, found {found}")]
    TooFewExceedances { found: usize },
    #[error("intervals must be at least 1")]
    InvalidInterval,
}

/// Waiting times, in samples, between successive values above a threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSeries {
    /// Threshold in units of standard deviation.
    pub threshold: f64,
    pub intervals: Vec<u64>,
    pub mean: f64,
    /// Length of the series the intervals were extracted from (0 if unknown).
    pub source_len: usize,
}

impl IntervalSeries {
    /// Wraps an existing interval sequence, e.g. a shuffled one.
    pub fn from_intervals(threshold: f64, intervals: Vec<u64>) -> Result<Self, IntervalError> {
        if intervals.is_empty() {
            return Err(IntervalError::TooFewExceedances { found: 0 });
        }
        if intervals.contains(&0) {
            return Err(IntervalError::InvalidInterval);
        }
        let total: u64 = intervals.iter().sum();
        let mean = total as f64 / intervals.len() as f64;
        Ok(Self {
            threshold,
            intervals,
            mean,
            source_len: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.intervals.iter().sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.intervals.iter().map(|&t| t as f64).collect()
    }
}

/// Intervals divided by their mean, `x = tau / mean(tau)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledIntervals {
    pub values: Vec<f64>,
    /// Threshold the intervals came from; `None` for model draws.
    pub threshold: Option<f64>,
}

impl ScaledIntervals {
    pub fn new(values: Vec<f64>, threshold: Option<f64>) -> Self {
        Self { values, threshold }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Indices `t` with `values[t] > q`.
pub fn exceedances(values: &[f64], q: f64) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > q)
        .map(|(t, _)| t)
        .collect()
}

/// Intervals of a plain sequence; the head before the first exceedance and
/// the tail after the last one are not intervals and are discarded.
pub fn intervals_from_values(values: &[f64], q: f64) -> Result<IntervalSeries, IntervalError> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(IntervalError::InvalidThreshold(q));
    }
    if values.is_empty() {
        return Err(IntervalError::EmptySeries);
    }
    let hits = exceedances(values, q);
    if hits.len() < 2 {
        return Err(IntervalError::TooFewExceedances { found: hits.len() });
    }
    let intervals: Vec<u64> = hits.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    let mean = (hits[hits.len() - 1] - hits[0]) as f64 / intervals.len() as f64;
    Ok(IntervalSeries {
        threshold: q,
        intervals,
        mean,
        source_len: values.len(),
    })
}

/// Return intervals of the normalized volatility above threshold `q`.
pub fn extract_intervals(
    r: &NormalizedVolatilitySeries,
    q: f64,
) -> Result<IntervalSeries, IntervalError> {
    intervals_from_values(&r.values, q)
}

pub fn scale(i: &IntervalSeries) -> ScaledIntervals {
    ScaledIntervals {
        values: i.intervals.iter().map(|&t| t as f64 / i.mean).collect(),
        threshold: Some(i.threshold),
    }
}
