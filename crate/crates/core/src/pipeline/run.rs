use rayon::prelude::*;

use super::report::*;
use super::{PipelineError, RunConfig};
use crate::ingest::{parse_minute_bars, preprocess, NormalizedVolatilitySeries};
use crate::intervals::{extract_intervals, scale, IntervalSeries, ScaledIntervals};
use crate::memory::{
    cluster_conditional_mean, conditional_pdf, dfa, hurst_crossover, log_spaced_windows,
    mean_conditional_interval, MemoryError,
};
use crate::scaling::{
    fit_stretched_exponential_with, goodness_of_fit, ks_two_sample, KsReport, scaling_verdict, FitOptions,
    PValues, ScalingError,
};
use crate::seed;

use super::config::InputSpec;

const SCALING_PAIR: (f64, f64) = (2.0, 5.0);

fn same_q(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

/// Loads one input as a normalized volatility series.
pub fn load_series(
    input: &InputSpec,
    cfg: &RunConfig,
) -> Result<NormalizedVolatilitySeries, PipelineError> {
    match (&input.path, &input.surrogate) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            let prices = parse_minute_bars(&input.symbol, &text, &cfg.grid()?)?;
            Ok(preprocess(&prices)?)
        }
        (None, Some(spec)) => {
            // magnitudes, so that every generator yields a volatility-like series
            let raw: Vec<f64> = spec.generate(None)?.into_iter().map(f64::abs).collect();
            Ok(NormalizedVolatilitySeries::from_raw(&input.symbol, raw)?)
        }
        _ => Err(PipelineError::Config(format!(
            "{}: give exactly one of path or surrogate",
            input.symbol
        ))),
    }
}

struct Stage<'a> {
    cfg: &'a RunConfig,
    seed: u64,
}

impl Stage<'_> {
    fn stream(&self, name: &str, q: f64) -> u64 {
        seed::derive(seed::derive(self.seed, seed::label(name)), q.to_bits())
    }

    fn scaling_test(
        &self,
        scaled: &[(f64, Result<ScaledIntervals, String>)],
    ) -> Result<Vec<KsReport>, String> {
        let find = |q: f64| {
            scaled
                .iter()
                .find(|(k, _)| same_q(*k, q))
                .ok_or_else(|| {
                    ScalingError::IncompleteInput(format!("threshold q = {q} not configured"))
                        .to_string()
                })
                .and_then(|(_, r)| r.clone().map_err(|e| format!("q = {q}: {e}")))
        };
        let low = find(SCALING_PAIR.0)?;
        let high = find(SCALING_PAIR.1)?;
        self.cfg
            .significance_levels
            .iter()
            .map(|&a| ks_two_sample(&low, &high, a).map_err(|e| e.to_string()))
            .collect()
    }
}

fn analyse(cfg: &RunConfig, input: &InputSpec) -> SymbolReport {
    let stage = Stage {
        cfg,
        seed: seed::derive(cfg.seed, seed::label(&input.symbol)),
    };
    let series = load_series(input, cfg);
    let mut report = SymbolReport {
        symbol: input.symbol.clone(),
        series: Outcome::Error(String::new()),
        intervals: Vec::new(),
        scaling_test: Outcome::Error("no series".into()),
        fit: Outcome::Error("no series".into()),
        gof: Vec::new(),
        gof_verdicts: Outcome::Error("no series".into()),
        memory: Outcome::Error("no series".into()),
        dfa: Outcome::Error("no series".into()),
    };
    let r = match series {
        Ok(r) => r,
        Err(e) => {
            report.series = Outcome::Error(e.to_string());
            return report;
        }
    };
    report.series = Outcome::Ok(SeriesSummary {
        len: r.len(),
        scale: r.scale,
        diagnostics: r.diagnostics.clone(),
    });

    let per_q: Vec<(f64, Result<IntervalSeries, String>)> = cfg
        .thresholds
        .iter()
        .map(|&q| (q, extract_intervals(&r, q).map_err(|e| e.to_string())))
        .collect();
    report.intervals = per_q
        .iter()
        .map(|(q, i)| ThresholdRecord {
            q: *q,
            result: Outcome::from_result(i.as_ref().map(|i| IntervalSummary {
                count: i.len(),
                mean: i.mean,
                exceedance_rate: (i.len() + 1) as f64 / r.len() as f64,
            }).map_err(Clone::clone)),
        })
        .collect();
    let scaled: Vec<(f64, Result<ScaledIntervals, String>)> = per_q
        .iter()
        .map(|(q, i)| (*q, i.as_ref().map(scale).map_err(Clone::clone)))
        .collect();

    report.scaling_test = Outcome::from_result(stage.scaling_test(&scaled));

    let usable: Vec<ScaledIntervals> = scaled
        .iter()
        .filter_map(|(_, s)| s.as_ref().ok().cloned())
        .collect();
    let options = FitOptions {
        bins_per_decade: cfg.bins_per_decade,
        ..FitOptions::default()
    };
    let fit = fit_stretched_exponential_with(&usable, &options);
    report.fit = Outcome::from_result(fit.clone());

    if let Ok(fit) = &fit {
        report.gof = scaled
            .iter()
            .filter(|(q, _)| same_q(*q, SCALING_PAIR.0) || same_q(*q, SCALING_PAIR.1))
            .map(|(q, s)| ThresholdRecord {
                q: *q,
                result: Outcome::from_result(s.clone().and_then(|s| {
                    goodness_of_fit(&s, fit, cfg.bootstrap_replicas, stage.stream("gof", *q))
                        .map_err(|e| e.to_string())
                })),
            })
            .collect();
        let pvalues: Vec<(f64, PValues)> = report
            .gof
            .iter()
            .filter_map(|g| g.result.ok().map(|e| (g.q, PValues { ks: e.p_ks, ksw: e.p_ksw })))
            .collect();
        report.gof_verdicts = Outcome::from_result(
            cfg.significance_levels
                .iter()
                .map(|&a| scaling_verdict(&pvalues, a))
                .collect::<Result<Vec<_>, _>>(),
        );
    } else {
        report.gof_verdicts = Outcome::Error("no fitted model".into());
    }

    let mq = cfg.memory.threshold;
    let memory_input = match per_q.iter().find(|(q, _)| same_q(*q, mq)) {
        Some((_, Ok(i))) => Ok(i.clone()),
        Some((_, Err(e))) => Err(e.clone()),
        None => extract_intervals(&r, mq).map_err(|e| e.to_string()),
    };
    match memory_input {
        Ok(i) => {
            report.memory = Outcome::Ok(MemorySection {
                threshold: mq,
                conditional_pdf: Outcome::from_result(conditional_pdf(&i, cfg.memory.conditional_bins)),
                conditional_mean: Outcome::from_result(mean_conditional_interval(
                    &i,
                    cfg.memory.mean_bins,
                )),
                clusters: Outcome::from_result(cluster_conditional_mean(&i, cfg.memory.cluster_max)),
            });
            report.dfa = Outcome::from_result(dfa_section(cfg, &i));
        }
        Err(e) => {
            report.memory = Outcome::Error(e.clone());
            report.dfa = Outcome::Error(e);
        }
    }
    report
}

fn dfa_section(cfg: &RunConfig, i: &IntervalSeries) -> Result<DfaSection, MemoryError> {
    let x = i.as_f64();
    let lmax = cfg.dfa.lmax.unwrap_or(x.len() / 4);
    let windows = log_spaced_windows(cfg.dfa.lmin, lmax, cfg.dfa.count);
    let result = dfa(&x, &windows)?;
    let hurst = Outcome::from_result(hurst_crossover(&result, cfg.dfa.split));
    Ok(DfaSection {
        threshold: i.threshold,
        result,
        hurst,
    })
}

/// Runs every configured input; failures stay inside the symbol's report.
pub fn run_pipeline(cfg: &RunConfig) -> Result<ReportBundle, PipelineError> {
    cfg.validate()?;
    let work = || -> Vec<SymbolReport> {
        cfg.inputs.par_iter().map(|input| analyse(cfg, input)).collect()
    };
    let mut symbols = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| PipelineError::Config(e.to_string()))?
            .install(work),
        None => work(),
    };
    symbols.sort_by(|a, b| a.symbol.cmp(&b.symbol));
    // execution settings stay out of the report so reruns compare byte for byte
    Ok(ReportBundle {
        config: RunConfig {
            workers: None,
            output_dir: None,
            ..cfg.clone()
        },
        symbols,
    })
}
