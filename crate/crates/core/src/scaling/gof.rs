//! Goodness of fit of the stretched exponential: KS and weighted KS
//! statistics with bootstrap p-values.
//!
//! Replicas reuse the fitted parameters. A draw `x = F_SE^-1(u)` satisfies
//! `F_SE(x) = u`, so replica statistics are evaluated directly on the
//! probability scale from the same uniforms `sample_se` would invert.

use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ks::Verdict;
use super::stretched::check_parameters;
use super::{se_ccdf, se_cdf, ScalingError, SeFit};
use crate::intervals::ScaledIntervals;
use crate::seed;

const MIN_REPLICAS: usize = 100;

/// Observed KS and KSW statistics of one sample against a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofStatistics {
    pub ks: f64,
    pub ksw: f64,
}

/// `|F_q - F_SE| / sqrt(F_SE (1 - F_SE))`.
pub fn weighted_deviation(deviation: f64, model_cdf: f64) -> f64 {
    deviation.abs() / (model_cdf * (1.0 - model_cdf)).sqrt()
}

/// KS and KSW over a sorted sample. `model` returns `(F, 1 - F)` at a point.
///
/// At each distinct sample value both the right-continuous empirical CDF and
/// its left limit are compared with the model. Points where the model CDF is
/// 0 or 1 carry no KSW weight and are skipped for KSW.
fn statistics_sorted(sorted: &[f64], model: impl Fn(f64) -> (f64, f64)) -> GofStatistics {
    let n = sorted.len() as f64;
    let mut ks = 0.0_f64;
    let mut ksw = 0.0_f64;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let (f, fc) = model(sorted[i]);
        let below = i as f64 / n;
        let upto = (j + 1) as f64 / n;
        let d = (upto - f).abs().max((f - below).abs());
        ks = ks.max(d);
        if f > 0.0 && fc > 0.0 {
            ksw = ksw.max(d / (f * fc).sqrt());
        }
        i = j + 1;
    }
    GofStatistics { ks, ksw }
}

fn observed_statistics(x: &ScaledIntervals, fit: &SeFit) -> Result<GofStatistics, ScalingError> {
    check_parameters(fit.alpha, fit.gamma)?;
    if x.is_empty() {
        return Err(ScalingError::EmptySample);
    }
    let mut sorted = x.values.clone();
    if sorted.iter().any(|v| v.is_nan()) {
        return Err(ScalingError::InvalidSample("NaN in sample".into()));
    }
    sorted.sort_by(f64::total_cmp);
    Ok(statistics_sorted(&sorted, |v| (se_cdf(fit, v), se_ccdf(fit, v))))
}

/// `KS = max |F_q - F_SE|` over the sample points.
pub fn ks_gof(x: &ScaledIntervals, fit: &SeFit) -> Result<f64, ScalingError> {
    observed_statistics(x, fit).map(|s| s.ks)
}

/// `KSW = max |F_q - F_SE| / sqrt(F_SE (1 - F_SE))` over the sample points.
pub fn ksw_gof(x: &ScaledIntervals, fit: &SeFit) -> Result<f64, ScalingError> {
    observed_statistics(x, fit).map(|s| s.ksw)
}

/// Statistics of `replicas` synthetic samples of size `n` drawn from `fit`.
/// Replica `b` uses the stream `seed::derive(seed, b)`, so results do not
/// depend on thread scheduling.
pub fn replica_statistics(
    fit: &SeFit,
    n: usize,
    replicas: usize,
    seed: u64,
) -> Result<Vec<GofStatistics>, ScalingError> {
    check_parameters(fit.alpha, fit.gamma)?;
    if n == 0 {
        return Err(ScalingError::EmptySample);
    }
    Ok((0..replicas as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed::rng(seed::derive(seed, b));
            let mut u: Vec<f64> = (0..n).map(|_| rng.sample(Open01)).collect();
            u.sort_by(f64::total_cmp);
            statistics_sorted(&u, |p| (p, 1.0 - p))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOutcome {
    pub observed: f64,
    pub replicas: usize,
    /// Replicas whose statistic strictly exceeded the observed one.
    pub exceeding: usize,
    pub p_value: f64,
}

fn check_replicas(replicas: usize) -> Result<(), ScalingError> {
    if replicas < MIN_REPLICAS {
        return Err(ScalingError::TooFewReplicas {
            needed: MIN_REPLICAS,
            found: replicas,
        });
    }
    Ok(())
}

fn p_value(observed: f64, sims: impl Iterator<Item = f64>, replicas: usize) -> BootstrapOutcome {
    let exceeding = sims.filter(|&s| s > observed).count();
    BootstrapOutcome {
        observed,
        replicas,
        exceeding,
        p_value: exceeding as f64 / replicas as f64,
    }
}

/// Fraction of replicas whose KS (or KSW when `weighted`) exceeds `observed`.
pub fn bootstrap_pvalue(
    fit: &SeFit,
    observed: f64,
    n: usize,
    replicas: usize,
    weighted: bool,
    seed: u64,
) -> Result<BootstrapOutcome, ScalingError> {
    check_replicas(replicas)?;
    let sims = replica_statistics(fit, n, replicas, seed)?;
    let pick = |s: &GofStatistics| if weighted { s.ksw } else { s.ks };
    Ok(p_value(observed, sims.iter().map(pick), replicas))
}

/// Goodness-of-fit results for one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofEntry {
    pub q: f64,
    pub n: usize,
    pub ks: f64,
    pub ksw: f64,
    pub p_ks: f64,
    pub p_ksw: f64,
    pub replicas: usize,
}

/// Observed KS/KSW of `x` against `fit` with bootstrap p-values from one
/// shared set of replicas.
pub fn goodness_of_fit(
    x: &ScaledIntervals,
    fit: &SeFit,
    replicas: usize,
    seed: u64,
) -> Result<GofEntry, ScalingError> {
    check_replicas(replicas)?;
    let observed = observed_statistics(x, fit)?;
    let sims = replica_statistics(fit, x.len(), replicas, seed)?;
    let p_ks = p_value(observed.ks, sims.iter().map(|s| s.ks), replicas).p_value;
    let p_ksw = p_value(observed.ksw, sims.iter().map(|s| s.ksw), replicas).p_value;
    Ok(GofEntry {
        q: x.threshold.unwrap_or(f64::NAN),
        n: x.len(),
        ks: observed.ks,
        ksw: observed.ksw,
        p_ks,
        p_ksw,
        replicas,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValues {
    pub ks: f64,
    pub ksw: f64,
}

/// Decisions on the stretched-exponential hypothesis at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofVerdict {
    pub level: f64,
    pub ks: Verdict,
    pub ksw: Verdict,
}

const VERDICT_THRESHOLDS: [f64; 2] = [2.0, 5.0];

/// Rejects when any p-value at `q = 2` or `q = 5` falls below `level`;
/// KS and KSW are decided separately.
pub fn scaling_verdict(per_q: &[(f64, PValues)], level: f64) -> Result<GofVerdict, ScalingError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(ScalingError::InvalidSignificance(level));
    }
    let mut min_ks = f64::INFINITY;
    let mut min_ksw = f64::INFINITY;
    for q in VERDICT_THRESHOLDS {
        let (_, p) = per_q
            .iter()
            .find(|(k, _)| (k - q).abs() < 1e-9)
            .ok_or_else(|| ScalingError::IncompleteInput(format!("missing p-values for q = {q}")))?;
        min_ks = min_ks.min(p.ks);
        min_ksw = min_ksw.min(p.ksw);
    }
    let decide = |p: f64| if p < level { Verdict::Reject } else { Verdict::Accept };
    Ok(GofVerdict {
        level,
        ks: decide(min_ks),
        ksw: decide(min_ksw),
    })
}
