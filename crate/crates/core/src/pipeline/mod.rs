//! Per-symbol orchestration, configuration and reports.

mod config;
mod report;
mod run;
mod tables;

use thiserror::Error;

pub use config::{DfaConfig, InputSpec, MemoryConfig, RunConfig};
pub use report::{
    DfaSection, IntervalSummary, MemorySection, Outcome, ReportBundle, SeriesSummary,
    SymbolReport, ThresholdRecord,
};
pub use run::{load_series, run_pipeline};
pub use tables::{render_tables, Tables, TABLE1_HEADER, TABLE2_HEADER};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] crate::ingest::IngestError),
    #[error(transparent)]
    Intervals(#[from] crate::intervals::IntervalError),
    #[error(transparent)]
    Scaling(#[from] crate::scaling::ScalingError),
    #[error(transparent)]
    Memory(#[from] crate::memory::MemoryError),
    #[error(transparent)]
    Surrogate(#[from] crate::surrogate::SurrogateError),
}
