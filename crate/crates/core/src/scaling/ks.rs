use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EmpiricalCdf, ScalingError};
use crate::intervals::ScaledIntervals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

/// Outcome of a two-sample KS comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical_value: f64,
    pub m: usize,
    pub n: usize,
    pub significance: f64,
    pub verdict: Verdict,
    /// Significance level at which the statistic equals the critical value.
    /// Values of 1 or more mean the test cannot reject at any level.
    pub crossing_significance: f64,
    /// Range over which the two CDFs were compared.
    pub overlap: (f64, f64),
}

fn check_significance(significance: f64) -> Result<(), ScalingError> {
    if significance > 0.0 && significance < 1.0 {
        Ok(())
    } else {
        Err(ScalingError::InvalidSignificance(significance))
    }
}

/// Asymptotic two-sample KS coefficient `c(a) = sqrt(-ln(a/2) / 2)`;
/// `c(0.05) = 1.3581`.
pub fn ks_coefficient(significance: f64) -> Result<f64, ScalingError> {
    check_significance(significance)?;
    Ok((-(significance / 2.0).ln() / 2.0).sqrt())
}

fn effective_size(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * n / (m + n)).sqrt()
}

/// `CV = c(a) / sqrt(mn / (m + n))`.
pub fn critical_value(m: usize, n: usize, significance: f64) -> Result<f64, ScalingError> {
    if m == 0 || n == 0 {
        return Err(ScalingError::EmptySample);
    }
    Ok(ks_coefficient(significance)? / effective_size(m, n))
}

fn significance_for_coefficient(c: f64) -> f64 {
    2.0 * (-2.0 * c * c).exp()
}

/// Solves `KS = c(a*) / sqrt(mn / (m + n))` for `a*`.
pub fn crossing_significance(statistic: f64, m: usize, n: usize) -> f64 {
    significance_for_coefficient(statistic * effective_size(m, n))
}

/// Crossing level recovered from a reported `(KS, CV)` pair when the
/// sample sizes are unknown: the critical value at `significance` fixes
/// `sqrt(mn / (m + n))`.
pub fn crossing_significance_from_cv(
    statistic: f64,
    critical_value: f64,
    significance: f64,
) -> Result<f64, ScalingError> {
    if !(critical_value > 0.0) {
        return Err(ScalingError::InvalidParameter(format!(
            "critical value must be positive, got {critical_value}"
        )));
    }
    let root = ks_coefficient(significance)? / critical_value;
    Ok(significance_for_coefficient(statistic * root))
}

/// Accepts the common-law hypothesis iff `KS < CV`; a tie rejects.
pub fn ks_verdict(statistic: f64, critical_value: f64) -> Verdict {
    if statistic < critical_value {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

/// Two-sample KS statistic over the overlap of the two sample ranges.
///
/// `|F_a - F_b|` is evaluated at every sample point of either sample that
/// falls in `[max(min a, min b), min(max a, max b)]`.
pub fn ks_two_sample(
    a: &ScaledIntervals,
    b: &ScaledIntervals,
    significance: f64,
) -> Result<KsReport, ScalingError> {
    check_significance(significance)?;
    let fa = EmpiricalCdf::new(a.values.clone())?;
    let fb = EmpiricalCdf::new(b.values.clone())?;
    let lo = fa.min().max(fb.min());
    let hi = fa.max().min(fb.max());
    if lo > hi {
        return Err(ScalingError::NoOverlap);
    }
    let in_range = |s: &[f64]| {
        let start = s.partition_point(|&v| v < lo);
        let end = s.partition_point(|&v| v <= hi);
        s[start..end].to_vec()
    };
    let statistic = in_range(fa.sorted())
        .into_iter()
        .chain(in_range(fb.sorted()))
        .map(|x| (fa.cdf(x) - fb.cdf(x)).abs())
        .fold(0.0, f64::max);

    let (m, n) = (fa.len(), fb.len());
    let critical_value = critical_value(m, n, significance)?;
    let verdict = ks_verdict(statistic, critical_value);
    Ok(KsReport {
        statistic,
        critical_value,
        m,
        n,
        significance,
        verdict,
        crossing_significance: crossing_significance(statistic, m, n),
        overlap: (lo, hi),
    })
}
