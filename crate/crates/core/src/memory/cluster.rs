//! Mean interval following a run of intervals on one side of the median.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::MemoryError;
use crate::intervals::IntervalSeries;
use crate::stats;

const MIN_INTERVALS: usize = 50;
const MIN_CLUSTERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterPoint {
    pub n: usize,
    /// Mean following interval scaled by the overall mean.
    pub mean: f64,
    pub count: usize,
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCurve {
    pub side: Side,
    pub points: Vec<ClusterPoint>,
}

impl ClusterCurve {
    /// Least-squares slope of the mean against `n`, if at least two sizes exist.
    pub fn slope(&self) -> Option<f64> {
        let n: Vec<f64> = self.points.iter().map(|p| p.n as f64).collect();
        let m: Vec<f64> = self.points.iter().map(|p| p.mean).collect();
        stats::fit_line(&n, &m).map(|l| l.slope)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCurves {
    pub median: f64,
    pub plus: ClusterCurve,
    pub minus: ClusterCurve,
}

fn median(values: &[u64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let h = v.len() / 2;
    if v.len() % 2 == 1 {
        v[h] as f64
    } else {
        0.5 * (v[h - 1] as f64 + v[h] as f64)
    }
}

/// Followers of each cluster size: `followers[n - 1]` lists, for every
/// maximal run on `side` of length at least `n`, the interval right after
/// the run's first `n` members. A window that ends the sequence has no
/// follower and is not counted.
pub(crate) fn cluster_followers(
    intervals: &[u64],
    median: f64,
    side: Side,
    n_max: usize,
) -> Vec<Vec<u64>> {
    let on_side = |t: u64| match side {
        Side::Plus => t as f64 > median,
        Side::Minus => t as f64 <= median,
    };
    let mut followers = vec![Vec::new(); n_max];
    let mut k = 0;
    while k < intervals.len() {
        if !on_side(intervals[k]) {
            k += 1;
            continue;
        }
        let start = k;
        while k < intervals.len() && on_side(intervals[k]) {
            k += 1;
        }
        let run = k - start;
        for (n, list) in (1..=run.min(n_max)).zip(followers.iter_mut()) {
            if let Some(&next) = intervals.get(start + n) {
                list.push(next);
            }
        }
    }
    followers
}

fn curve(i: &IntervalSeries, median: f64, side: Side, n_max: usize) -> ClusterCurve {
    let points = cluster_followers(&i.intervals, median, side, n_max)
        .into_iter()
        .enumerate()
        .filter(|(_, f)| f.len() >= MIN_CLUSTERS)
        .map(|(k, f)| {
            let scaled: Vec<f64> = f.iter().map(|&t| t as f64 / i.mean).collect();
            let count = scaled.len();
            let sample_std =
                stats::population_std(&scaled) * (count as f64 / (count - 1) as f64).sqrt();
            ClusterPoint {
                n: k + 1,
                mean: stats::mean(&scaled),
                count,
                std_err: sample_std / (count as f64).sqrt(),
            }
        })
        .collect();
    ClusterCurve { side, points }
}

/// Mean interval after `n` consecutive intervals above (`+`) or not above
/// (`-`) the median, for `n = 1..=n_max`. Each maximal run contributes its
/// leading `n`-window once for every `n` up to its length; sizes with
/// fewer than 10 clusters are omitted.
pub fn cluster_conditional_mean(
    i: &IntervalSeries,
    n_max: usize,
) -> Result<ClusterCurves, MemoryError> {
    if i.len() < MIN_INTERVALS {
        return Err(MemoryError::InsufficientData {
            what: "intervals",
            needed: MIN_INTERVALS,
            found: i.len(),
        });
    }
    let median = median(&i.intervals);
    Ok(ClusterCurves {
        median,
        plus: curve(i, median, Side::Plus, n_max),
        minus: curve(i, median, Side::Minus, n_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3, 1, 2]), 2.0);
        assert_eq!(median(&[4, 1, 2, 3]), 2.5);
    }

    #[test]
    fn hand_counted_followers() {
        // median 2: sides - - + + + - + -
        let v = [1, 2, 3, 4, 5, 1, 9, 2];
        let plus = cluster_followers(&v, 2.0, Side::Plus, 4);
        assert_eq!(plus, vec![vec![4, 2], vec![5], vec![1], vec![]]);
        let minus = cluster_followers(&v, 2.0, Side::Minus, 3);
        assert_eq!(minus, vec![vec![2, 9], vec![3], vec![]]);
    }

    #[test]
    fn no_run_of_three() {
        let v: Vec<u64> = (0..120).map(|k| if (k / 2) % 2 == 0 { 1 } else { 9 }).collect();
        let i = IntervalSeries::from_intervals(2.0, v).unwrap();
        let c = cluster_conditional_mean(&i, 5).unwrap();
        for curve in [&c.plus, &c.minus] {
            let sizes: Vec<usize> = curve.points.iter().map(|p| p.n).collect();
            assert_eq!(sizes, vec![1, 2]);
        }
        assert_eq!(c.plus.points[0].mean, 9.0 / i.mean);
        assert_eq!(c.plus.points[1].mean, 1.0 / i.mean);
        assert_eq!(c.minus.points[0].mean, 1.0 / i.mean);
        assert_eq!(c.minus.points[1].mean, 9.0 / i.mean);
        assert_eq!(c.plus.side.to_string(), "+");
    }

    #[test]
    fn too_short() {
        let i = IntervalSeries::from_intervals(2.0, vec![1; 49]).unwrap();
        assert!(cluster_conditional_mean(&i, 5).is_err());
    }
}
