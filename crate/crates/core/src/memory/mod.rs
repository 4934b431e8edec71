//! Short- and long-term memory of interval sequences.

mod cluster;
mod conditional;
mod dfa;

use thiserror::Error;

pub use cluster::{cluster_conditional_mean, ClusterCurve, ClusterCurves, ClusterPoint, Side};
pub use conditional::{
    conditional_pdf, equal_occupancy_bins, mean_conditional_interval, ConditionalBin,
    ConditionalMeanCurve, ConditionalPdf, MeanBin,
};
pub use dfa::{
    dfa, fit_hurst, hurst_crossover, log_spaced_windows, DfaResult, HurstFit, HurstPair,
    DEFAULT_SPLIT,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MemoryError {
    #[error("need at least {needed} {what}, found {found}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("window size {window} outside [4, {max}] for a series of length {len}")]
    InvalidWindow { window: usize, max: usize, len: usize },
    #[error("need at least {needed} window sizes {side} the split, found {found}")]
    InsufficientScales {
        side: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("fluctuation function vanishes at l = {window}")]
    DegenerateFluctuation { window: usize },
    #[error(transparent)]
    Scaling(#[from] crate::scaling::ScalingError),
}
