//! Distributions of scaled return intervals.
//!
//! Scaling across thresholds is tested with a two-sample Kolmogorov-Smirnov
//! statistic restricted to the overlap of the two samples. The common
//! scaling function is modelled as a stretched exponential
//! `f(x) = c exp(-alpha x^gamma)`, fitted on the log-binned density, and its
//! adequacy is judged with bootstrap p-values of the KS and weighted KS
//! (KSW) statistics.

mod ecdf;
mod fit;
mod gof;
mod ks;
mod stretched;

use thiserror::Error;

pub use ecdf::{empirical_cdf, log_binned_density, log_binned_pdf, BinnedPdf, EmpiricalCdf, PdfBin};
pub use fit::{fit_stretched_exponential, fit_stretched_exponential_with, FitOptions};
pub use gof::{
    bootstrap_pvalue, goodness_of_fit, ks_gof, ksw_gof, replica_statistics, scaling_verdict,
    weighted_deviation, BootstrapOutcome, GofEntry, GofStatistics, GofVerdict, PValues,
};
pub use ks::{
    critical_value, crossing_significance, crossing_significance_from_cv, ks_coefficient,
    ks_two_sample, ks_verdict, KsReport, Verdict,
};
pub use stretched::{sample_se, se_ccdf, se_cdf, se_quantile, SeFit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalingError {
    #[error("sample is empty")]
    EmptySample,
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidSignificance(f64),
    #[error("samples have no overlapping range")]
    NoOverlap,
    #[error("need at least {needed} samples to fit, got {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("only {found} bins hold enough counts to fit (need {needed})")]
    InsufficientSupport { needed: usize, found: usize },
    #[error("fit did not converge: {0}")]
    FitDiverged(String),
    #[error("need at least {needed} bootstrap replicas, got {found}")]
    TooFewReplicas { needed: usize, found: usize },
    #[error("incomplete input: {0}")]
    IncompleteInput(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
