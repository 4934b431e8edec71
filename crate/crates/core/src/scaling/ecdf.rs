use serde::{Deserialize, Serialize};

use super::ScalingError;
use crate::intervals::ScaledIntervals;

/// Right-continuous empirical CDF `F(x) = #{x_k <= x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self, ScalingError> {
        if values.is_empty() {
            return Err(ScalingError::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(ScalingError::InvalidSample("NaN in sample".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// `F(x-)`, the mass strictly below `x`.
    pub fn left_limit(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    /// Complementary CDF `C(x) = 1 - F(x)`.
    pub fn ccdf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }
}

pub fn empirical_cdf(x: &ScaledIntervals) -> Result<EmpiricalCdf, ScalingError> {
    EmpiricalCdf::new(x.values.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfBin {
    pub lower: f64,
    pub upper: f64,
    /// Geometric mean of the edges.
    pub center: f64,
    pub count: usize,
    /// `count / (n * width)`.
    pub density: f64,
}

impl PdfBin {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Density estimate on logarithmically spaced bins; empty bins are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedPdf {
    pub bins_per_decade: usize,
    pub sample_size: usize,
    pub bins: Vec<PdfBin>,
}

impl BinnedPdf {
    pub fn integral(&self) -> f64 {
        self.bins.iter().map(|b| b.density * b.width()).sum()
    }
}

/// Log-binned density of a positive sample. Bin `k` covers
/// `[x_min 10^(k/b), x_min 10^((k+1)/b))`; the last bin also holds `x_max`.
pub fn log_binned_density(values: &[f64], bins_per_decade: usize) -> Result<BinnedPdf, ScalingError> {
    if bins_per_decade < 2 {
        return Err(ScalingError::InvalidParameter(format!(
            "bins_per_decade must be at least 2, got {bins_per_decade}"
        )));
    }
    if values.is_empty() {
        return Err(ScalingError::EmptySample);
    }
    if let Some(bad) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(ScalingError::InvalidSample(format!(
            "log binning needs positive finite values, found {bad}"
        )));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let per = bins_per_decade as f64;
    let nbins = ((per * (hi / lo).log10()).ceil() as usize).max(1);
    let edge = |k: usize| lo * 10f64.powf(k as f64 / per);

    let mut counts = vec![0usize; nbins];
    for &v in values {
        let mut k = ((per * (v / lo).log10()).floor().max(0.0) as usize).min(nbins - 1);
        if k > 0 && v < edge(k) {
            k -= 1;
        } else if k + 1 < nbins && v >= edge(k + 1) {
            k += 1;
        }
        counts[k] += 1;
    }

    let n = values.len() as f64;
    let bins = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &count)| {
            let (lower, upper) = (edge(k), edge(k + 1));
            PdfBin {
                lower,
                upper,
                center: (lower * upper).sqrt(),
                count,
                density: count as f64 / (n * (upper - lower)),
            }
        })
        .collect();
    Ok(BinnedPdf {
        bins_per_decade,
        sample_size: values.len(),
        bins,
    })
}

pub fn log_binned_pdf(x: &ScaledIntervals, bins_per_decade: usize) -> Result<BinnedPdf, ScalingError> {
    log_binned_density(&x.values, bins_per_decade)
}
