//! Order-1 detrended fluctuation analysis.
//!
//! The profile carries a leading zero, `Y_0 = 0, Y_j = sum_{k<j} (x_k - mean)`,
//! so reversing the series reverses and negates the profile. Windows of `l`
//! profile points are laid from both ends, which makes `F(l)` invariant under
//! reversal of the series.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MemoryError;
use crate::stats::{self, LineFit};

pub const DEFAULT_SPLIT: usize = 50;
const MIN_WINDOW: usize = 4;
const MIN_SCALES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaResult {
    pub windows: Vec<usize>,
    pub fluctuations: Vec<f64>,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstFit {
    pub hurst: f64,
    pub stderr: f64,
    /// Number of window sizes in the fit.
    pub scales: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstPair {
    pub split: usize,
    pub small: HurstFit,
    pub large: HurstFit,
}

/// `count` distinct integer window sizes spaced evenly in `ln l` over
/// `[lmin, lmax]`. Rounding can merge neighbours, so fewer may be returned.
pub fn log_spaced_windows(lmin: usize, lmax: usize, count: usize) -> Vec<usize> {
    if count == 0 || lmin == 0 || lmax < lmin {
        return Vec::new();
    }
    if count == 1 || lmin == lmax {
        return vec![lmin];
    }
    let ratio = (lmax as f64 / lmin as f64).ln();
    let mut out: Vec<usize> = (0..count)
        .map(|k| {
            let t = k as f64 / (count - 1) as f64;
            ((lmin as f64) * (ratio * t).exp()).round() as usize
        })
        .map(|l| l.clamp(lmin, lmax))
        .collect();
    out.dedup();
    out
}

fn profile(series: &[f64]) -> Vec<f64> {
    let x0 = series[0];
    let n = series.len() as f64;
    let mean = x0 + stats::compensated_sum(series.iter().map(|x| x - x0)) / n;
    let mut y = Vec::with_capacity(series.len() + 1);
    let mut acc = 0.0;
    y.push(0.0);
    for x in series {
        acc += x - mean;
        y.push(acc);
    }
    y
}

/// Residual sum of squares after removing the least-squares line.
fn detrended_rss(y: &[f64]) -> f64 {
    let l = y.len() as f64;
    let t_mean = 0.5 * (l - 1.0);
    let y_mean = y.iter().sum::<f64>() / l;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (k, v) in y.iter().enumerate() {
        let t = k as f64 - t_mean;
        sty += t * (v - y_mean);
        stt += t * t;
    }
    let slope = sty / stt;
    y.iter()
        .enumerate()
        .map(|(k, v)| {
            let r = v - y_mean - slope * (k as f64 - t_mean);
            r * r
        })
        .sum()
}

fn fluctuation(y: &[f64], l: usize) -> f64 {
    let windows = y.len() / l;
    let end = y.len();
    let mut total = 0.0;
    for w in 0..windows {
        total += detrended_rss(&y[w * l..(w + 1) * l]);
    }
    for w in 0..windows {
        total += detrended_rss(&y[end - (w + 1) * l..end - w * l]);
    }
    (total / (2 * windows * l) as f64).sqrt()
}

/// `F(l)` for each window size. Sizes must lie in `[4, N/4]`.
pub fn dfa(series: &[f64], windows: &[usize]) -> Result<DfaResult, MemoryError> {
    let n = series.len();
    let max = n / 4;
    if let Some(&bad) = windows.iter().find(|&&l| l < MIN_WINDOW || l > max) {
        return Err(MemoryError::InvalidWindow {
            window: bad,
            max,
            len: n,
        });
    }
    if windows.is_empty() {
        return Err(MemoryError::InsufficientData {
            what: "window sizes",
            needed: 1,
            found: 0,
        });
    }
    let y = profile(series);
    let fluctuations = windows.par_iter().map(|&l| fluctuation(&y, l)).collect();
    Ok(DfaResult {
        windows: windows.to_vec(),
        fluctuations,
        len: n,
    })
}

fn fit_points(d: &DfaResult, keep: impl Fn(usize) -> bool) -> Result<(Vec<f64>, Vec<f64>), MemoryError> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (&l, &f) in d.windows.iter().zip(&d.fluctuations) {
        if !keep(l) {
            continue;
        }
        if !(f > 0.0) {
            return Err(MemoryError::DegenerateFluctuation { window: l });
        }
        x.push((l as f64).ln());
        y.push(f.ln());
    }
    Ok((x, y))
}

fn to_hurst(line: LineFit) -> HurstFit {
    HurstFit {
        hurst: line.slope,
        stderr: line.slope_stderr,
        scales: line.points,
    }
}

/// Slope of `ln F` against `ln l` over windows in `[lmin, lmax]`.
pub fn fit_hurst(d: &DfaResult, lmin: usize, lmax: usize) -> Result<HurstFit, MemoryError> {
    let (x, y) = fit_points(d, |l| l >= lmin && l <= lmax)?;
    if x.len() < 2 {
        return Err(MemoryError::InsufficientScales {
            side: "within",
            needed: 2,
            found: x.len(),
        });
    }
    stats::fit_line(&x, &y)
        .map(to_hurst)
        .ok_or(MemoryError::InsufficientScales {
            side: "within",
            needed: 2,
            found: x.len(),
        })
}

/// Separate fits on `l < split` and `l > split`.
pub fn hurst_crossover(d: &DfaResult, split: usize) -> Result<HurstPair, MemoryError> {
    let side = |name: &'static str, keep: &dyn Fn(usize) -> bool| {
        let (x, y) = fit_points(d, keep)?;
        let short = MemoryError::InsufficientScales {
            side: name,
            needed: MIN_SCALES,
            found: x.len(),
        };
        if x.len() < MIN_SCALES {
            return Err(short);
        }
        stats::fit_line(&x, &y).map(to_hurst).ok_or(short)
    };
    Ok(HurstPair {
        split,
        small: side("below", &|l| l < split)?,
        large: side("above", &|l| l > split)?,
    })
}
