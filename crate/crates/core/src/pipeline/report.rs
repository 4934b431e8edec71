use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::ingest::Diagnostics;
use crate::memory::{ClusterCurves, ConditionalMeanCurve, ConditionalPdf, DfaResult, HurstPair};
use crate::scaling::{GofEntry, GofVerdict, KsReport, SeFit};

/// Result of one report section: a value or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum Outcome<T> {
    Ok(T),
    Error(String),
}

impl<T> Outcome<T> {
    pub fn from_result<E: std::fmt::Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }

    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Error(_) => None,
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Outcome::Error(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub len: usize,
    pub scale: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub count: usize,
    pub mean: f64,
    pub exceedance_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord<T> {
    pub q: f64,
    pub result: Outcome<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemorySection {
    pub threshold: f64,
    pub conditional_pdf: Outcome<ConditionalPdf>,
    pub conditional_mean: Outcome<ConditionalMeanCurve>,
    pub clusters: Outcome<ClusterCurves>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaSection {
    pub threshold: f64,
    pub result: DfaResult,
    pub hurst: Outcome<HurstPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolReport {
    pub symbol: String,
    pub series: Outcome<SeriesSummary>,
    pub intervals: Vec<ThresholdRecord<IntervalSummary>>,
    /// KS test of the `q = 2` against the `q = 5` intervals, one per level.
    pub scaling_test: Outcome<Vec<KsReport>>,
    pub fit: Outcome<SeFit>,
    pub gof: Vec<ThresholdRecord<GofEntry>>,
    pub gof_verdicts: Outcome<Vec<GofVerdict>>,
    pub memory: Outcome<MemorySection>,
    pub dfa: Outcome<DfaSection>,
}

impl SymbolReport {
    /// Whether any requested section failed.
    pub fn has_errors(&self) -> bool {
        self.series.is_error()
            || self.intervals.iter().any(|r| r.result.is_error())
            || self.scaling_test.is_error()
            || self.fit.is_error()
            || self.gof.iter().any(|r| r.result.is_error())
            || self.gof_verdicts.is_error()
            || self.dfa.is_error()
            || match &self.memory {
                Outcome::Ok(m) => {
                    m.conditional_pdf.is_error()
                        || m.conditional_mean.is_error()
                        || m.clusters.is_error()
                }
                Outcome::Error(_) => true,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub config: RunConfig,
    /// Sorted by symbol.
    pub symbols: Vec<SymbolReport>,
}

impl ReportBundle {
    pub fn has_errors(&self) -> bool {
        self.symbols.iter().any(SymbolReport::has_errors)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
