//! Statistical analysis of volatility return intervals.
//!
//! The crate follows a high-frequency price series through the whole
//! return-interval workflow:
//!
//! - [`ingest`]: minute bars to deseasonalized, unit-variance volatility
//! - [`intervals`]: waiting times between threshold exceedances
//! - [`scaling`]: empirical distributions, two-sample KS scaling tests,
//!   stretched-exponential fits and bootstrap goodness of fit
//! - [`memory`]: conditional statistics, cluster statistics and DFA
//! - [`surrogate`]: seeded synthetic series with known properties
//! - [`pipeline`]: per-symbol orchestration, configuration and reports

pub mod ingest;
pub mod intervals;
pub mod memory;
pub mod pipeline;
pub mod scaling;
pub mod seed;
pub mod stats;
pub mod surrogate;

pub use ingest::{
    compute_volatility, deseasonalize, intraday_pattern, normalize, parse_minute_bars, GridSpec,
    IngestError, IntradayPattern, NormalizedVolatilitySeries, PriceSeries, VolatilitySeries,
};
pub use intervals::{extract_intervals, scale, IntervalError, IntervalSeries, ScaledIntervals};
pub use memory::{
    cluster_conditional_mean, conditional_pdf, dfa, hurst_crossover, mean_conditional_interval,
    DfaResult, MemoryError,
};
pub use scaling::{
    bootstrap_pvalue, critical_value, empirical_cdf, fit_stretched_exponential, ks_gof,
    ks_two_sample, ksw_gof, log_binned_pdf, sample_se, scaling_verdict, se_cdf, KsReport,
    ScalingError, SeFit,
};
pub use surrogate::{fgn, long_memory_volatility, shuffle, student_returns, SurrogateError};
