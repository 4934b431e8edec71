use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::ingest::GridSpec;
use crate::surrogate::SurrogateSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DfaConfig {
    pub lmin: usize,
    /// Defaults to a quarter of the series length.
    pub lmax: Option<usize>,
    pub count: usize,
    pub split: usize,
}

impl Default for DfaConfig {
    fn default() -> Self {
        Self {
            lmin: 4,
            lmax: None,
            count: 20,
            split: crate::memory::DEFAULT_SPLIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemoryConfig {
    /// Threshold whose intervals feed the memory and DFA sections.
    pub threshold: f64,
    pub conditional_bins: usize,
    pub mean_bins: usize,
    pub cluster_max: usize,
}

impl Default for MemoryConfig {
    fn default() -> Self {
        Self {
            threshold: 2.0,
            conditional_bins: 4,
            mean_bins: 8,
            cluster_max: 10,
        }
    }
}

/// One analysed series: minute bars on disk or a synthetic volatility series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrogate: Option<SurrogateSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub slots: usize,
    /// Minutes per trading session; a single session when empty.
    pub sessions: Vec<usize>,
    pub thresholds: Vec<f64>,
    pub significance_levels: Vec<f64>,
    pub bootstrap_replicas: usize,
    pub bins_per_decade: usize,
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub memory: MemoryConfig,
    pub dfa: DfaConfig,
    pub inputs: Vec<InputSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            slots: 240,
            sessions: vec![120, 120],
            thresholds: vec![2.0, 3.0, 4.0, 5.0],
            significance_levels: vec![0.05, 0.01],
            bootstrap_replicas: 1000,
            bins_per_decade: 10,
            workers: None,
            output_dir: None,
            memory: MemoryConfig::default(),
            dfa: DfaConfig::default(),
            inputs: Vec::new(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> PipelineError {
    PipelineError::Config(msg.into())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let cfg: Self = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative input paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(base) = path.parent() {
            for input in &mut cfg.inputs {
                if let Some(p) = &mut input.path {
                    if p.is_relative() {
                        *p = base.join(&*p);
                    }
                }
            }
        }
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<GridSpec, PipelineError> {
        let sessions = if self.sessions.is_empty() {
            vec![self.slots]
        } else {
            self.sessions.clone()
        };
        GridSpec::new(self.slots, sessions).map_err(|e| invalid(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.thresholds.is_empty() {
            return Err(invalid("threshold list is empty"));
        }
        if self.thresholds.iter().any(|q| !(*q > 0.0) || !q.is_finite()) {
            return Err(invalid("thresholds must be positive"));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("thresholds must be strictly increasing"));
        }
        if self.significance_levels.is_empty()
            || self.significance_levels.iter().any(|a| !(*a > 0.0 && *a < 1.0))
        {
            return Err(invalid("significance levels must lie in (0, 1)"));
        }
        if self.bootstrap_replicas < 100 {
            return Err(invalid(format!(
                "bootstrap_replicas must be at least 100, got {}",
                self.bootstrap_replicas
            )));
        }
        if self.bins_per_decade == 0 {
            return Err(invalid("bins_per_decade must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("workers must be positive"));
        }
        if !(self.memory.threshold > 0.0) {
            return Err(invalid("memory threshold must be positive"));
        }
        if self.dfa.count < 2 || self.dfa.lmin < 4 {
            return Err(invalid("dfa needs count >= 2 and lmin >= 4"));
        }
        self.grid()?;
        let mut seen = BTreeSet::new();
        for input in &self.inputs {
            if !seen.insert(input.symbol.as_str()) {
                return Err(invalid(format!("duplicate symbol {}", input.symbol)));
            }
            match (&input.path, &input.surrogate) {
                (Some(_), None) => {}
                (None, Some(s)) => {
                    if matches!(s, SurrogateSpec::Shuffle { .. } | SurrogateSpec::SeIntervals { .. }) {
                        return Err(invalid(format!(
                            "{}: surrogate kind does not produce a volatility series",
                            input.symbol
                        )));
                    }
                }
                _ => {
                    return Err(invalid(format!(
                        "{}: give exactly one of path or surrogate",
                        input.symbol
                    )))
                }
            }
        }
        Ok(())
    }
}
