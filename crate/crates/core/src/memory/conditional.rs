//! Statistics of an interval conditioned on the size of its predecessor.

use serde::{Deserialize, Serialize};

use super::MemoryError;
use crate::intervals::IntervalSeries;
use crate::scaling::{log_binned_density, BinnedPdf};
use crate::stats;

const PAIRS_PER_BIN: usize = 8;
const BINS_PER_DECADE: usize = 10;

/// Equal-occupancy quantile bins: element `k` goes to bin
/// `rank(k) * nbins / len`, ranks ordered by value then position.
pub fn equal_occupancy_bins(values: &[u64], nbins: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&k| (values[k], k));
    let mut bins = vec![0; values.len()];
    for (rank, &k) in order.iter().enumerate() {
        bins[k] = rank * nbins / values.len();
    }
    bins
}

/// Bins of the predecessors `tau_0 .. tau_{L-2}`, one per consecutive pair.
/// A sequence without variation in its predecessors forms a single bin.
fn predecessor_bins(i: &IntervalSeries, nbins: usize) -> Result<(Vec<usize>, usize), MemoryError> {
    let pairs = i.len().saturating_sub(1);
    let needed = PAIRS_PER_BIN * nbins;
    if nbins == 0 || pairs < needed {
        return Err(MemoryError::InsufficientData {
            what: "interval pairs",
            needed: needed.max(PAIRS_PER_BIN),
            found: pairs,
        });
    }
    let predecessors = &i.intervals[..pairs];
    let constant = predecessors.iter().all(|&t| t == predecessors[0]);
    if constant {
        Ok((vec![0; pairs], 1))
    } else {
        Ok((equal_occupancy_bins(predecessors, nbins), nbins))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalBin {
    /// Scaled range `tau_0 / mean` of the predecessors in this bin.
    pub tau0_range: (f64, f64),
    pub count: usize,
    /// Scaled successors `tau / mean`.
    #[serde(skip)]
    pub successors: Vec<f64>,
    pub pdf: BinnedPdf,
}

/// `P(tau | tau_0)` for each predecessor bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalPdf {
    pub bins: Vec<ConditionalBin>,
    pub pairs: usize,
}

impl ConditionalPdf {
    /// Bin with the smallest predecessors.
    pub fn lowest(&self) -> &ConditionalBin {
        &self.bins[0]
    }

    /// Bin with the largest predecessors.
    pub fn highest(&self) -> &ConditionalBin {
        &self.bins[self.bins.len() - 1]
    }
}

pub fn conditional_pdf(i: &IntervalSeries, nbins: usize) -> Result<ConditionalPdf, MemoryError> {
    let (bin_of, nbins) = predecessor_bins(i, nbins)?;
    let mut groups: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); nbins];
    for (k, &b) in bin_of.iter().enumerate() {
        groups[b].0.push(i.intervals[k] as f64 / i.mean);
        groups[b].1.push(i.intervals[k + 1] as f64 / i.mean);
    }
    let bins = groups
        .into_iter()
        .map(|(tau0, successors)| {
            let (lo, hi) = tau0
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let pdf = log_binned_density(&successors, BINS_PER_DECADE)?;
            Ok(ConditionalBin {
                tau0_range: (lo, hi),
                count: successors.len(),
                successors,
                pdf,
            })
        })
        .collect::<Result<Vec<_>, MemoryError>>()?;
    Ok(ConditionalPdf {
        bins,
        pairs: bin_of.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanBin {
    /// Mean scaled predecessor in the bin.
    pub tau0_center: f64,
    /// `<tau | tau_0> / mean`.
    pub mean: f64,
    /// `<tau | tau_0>` in samples.
    pub raw_mean: f64,
    pub count: usize,
    /// Standard error of the scaled mean.
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalMeanCurve {
    pub bins: Vec<MeanBin>,
}

pub fn mean_conditional_interval(
    i: &IntervalSeries,
    nbins: usize,
) -> Result<ConditionalMeanCurve, MemoryError> {
    let (bin_of, nbins) = predecessor_bins(i, nbins)?;
    let mut tau0 = vec![Vec::new(); nbins];
    let mut next = vec![Vec::new(); nbins];
    for (k, &b) in bin_of.iter().enumerate() {
        tau0[b].push(i.intervals[k] as f64);
        next[b].push(i.intervals[k + 1] as f64);
    }
    let bins = tau0
        .iter()
        .zip(&next)
        .map(|(t0, t)| {
            let raw_mean = stats::mean(t);
            let std_err = if t.len() > 1 {
                stats::population_std(t) * (t.len() as f64 / (t.len() - 1) as f64).sqrt()
                    / (t.len() as f64).sqrt()
                    / i.mean
            } else {
                0.0
            };
            MeanBin {
                tau0_center: stats::mean(t0) / i.mean,
                mean: raw_mean / i.mean,
                raw_mean,
                count: t.len(),
                std_err,
            }
        })
        .collect();
    Ok(ConditionalMeanCurve { bins })
}
