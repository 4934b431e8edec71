//! Python bindings for the `volret` return-interval toolkit.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use volret::ingest::{self, GridSpec};
use volret::intervals::{self, IntervalSeries, ScaledIntervals};
use volret::memory;
use volret::pipeline::{self, ReportBundle, RunConfig};
use volret::scaling;
use volret::surrogate;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scaled(values: Vec<f64>) -> ScaledIntervals {
    ScaledIntervals::new(values, None)
}

/// Normalized volatility `r(t)` from `date,minute_index,price` text.
#[pyfunction]
#[pyo3(signature = (text, symbol = "series", slots = 240, sessions = vec![120, 120]))]
fn preprocess(text: &str, symbol: &str, slots: usize, sessions: Vec<usize>) -> PyResult<Vec<f64>> {
    let grid = GridSpec::new(slots, sessions).map_err(value_error)?;
    let prices = ingest::parse_minute_bars(symbol, text, &grid).map_err(value_error)?;
    Ok(ingest::preprocess(&prices).map_err(value_error)?.values)
}

/// Waiting times between successive values strictly above `q`.
#[pyfunction]
fn extract_intervals(values: Vec<f64>, q: f64) -> PyResult<Vec<u64>> {
    Ok(intervals::intervals_from_values(&values, q)
        .map_err(value_error)?
        .intervals)
}

/// Intervals divided by their mean.
#[pyfunction]
fn scale(intervals: Vec<u64>) -> PyResult<Vec<f64>> {
    let i = IntervalSeries::from_intervals(0.0, intervals).map_err(value_error)?;
    Ok(intervals::scale(&i).values)
}

#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct KsReport {
    statistic: f64,
    critical_value: f64,
    m: usize,
    n: usize,
    significance: f64,
    accept: bool,
    crossing_significance: f64,
}

#[pymethods]
impl KsReport {
    fn __repr__(&self) -> String {
        format!(
            "KsReport(statistic={:.4}, critical_value={:.4}, accept={})",
            self.statistic,
            self.critical_value,
            if self.accept { "True" } else { "False" }
        )
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, significance = 0.05))]
fn ks_two_sample(a: Vec<f64>, b: Vec<f64>, significance: f64) -> PyResult<KsReport> {
    let r = scaling::ks_two_sample(&scaled(a), &scaled(b), significance).map_err(value_error)?;
    Ok(KsReport {
        statistic: r.statistic,
        critical_value: r.critical_value,
        m: r.m,
        n: r.n,
        significance: r.significance,
        accept: r.verdict.is_accept(),
        crossing_significance: r.crossing_significance,
    })
}

#[pyfunction]
fn critical_value(m: usize, n: usize, significance: f64) -> PyResult<f64> {
    scaling::critical_value(m, n, significance).map_err(value_error)
}

/// Significance level at which `statistic` equals the critical value.
#[pyfunction]
fn crossing_significance(statistic: f64, m: usize, n: usize) -> f64 {
    scaling::crossing_significance(statistic, m, n)
}

/// Stretched exponential `c exp(-alpha x^gamma)`.
#[pyclass(frozen, name = "SeFit", skip_from_py_object)]
#[derive(Clone)]
struct PySeFit(scaling::SeFit);

#[pymethods]
impl PySeFit {
    #[new]
    fn new(alpha: f64, gamma: f64) -> PyResult<Self> {
        scaling::SeFit::from_parameters(alpha, gamma)
            .map(Self)
            .map_err(value_error)
    }

    /// Normalized model with unit mean.
    #[staticmethod]
    fn unit_mean(gamma: f64) -> PyResult<Self> {
        scaling::SeFit::unit_mean(gamma).map(Self).map_err(value_error)
    }

    #[getter]
    fn c(&self) -> f64 {
        self.0.c
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    #[getter]
    fn normalized_c(&self) -> f64 {
        self.0.normalized_c
    }

    fn density(&self, x: f64) -> f64 {
        self.0.density(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        scaling::se_cdf(&self.0, x)
    }

    fn quantile(&self, u: f64) -> f64 {
        scaling::se_quantile(&self.0, u)
    }

    fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        scaling::sample_se(&self.0, n, seed).values
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("fit serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "SeFit(c={}, alpha={}, gamma={})",
            self.0.c, self.0.alpha, self.0.gamma
        )
    }
}

/// Least-squares fit to the pooled log-binned density of the samples.
#[pyfunction]
fn fit_stretched_exponential(samples: Vec<Vec<f64>>) -> PyResult<PySeFit> {
    let samples: Vec<ScaledIntervals> = samples.into_iter().map(scaled).collect();
    scaling::fit_stretched_exponential(&samples)
        .map(PySeFit)
        .map_err(value_error)
}

#[pyfunction]
fn ks_gof(x: Vec<f64>, fit: &PySeFit) -> PyResult<f64> {
    scaling::ks_gof(&scaled(x), &fit.0).map_err(value_error)
}

#[pyfunction]
fn ksw_gof(x: Vec<f64>, fit: &PySeFit) -> PyResult<f64> {
    scaling::ksw_gof(&scaled(x), &fit.0).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (fit, observed, n, replicas = 1000, weighted = false, seed = 1))]
fn bootstrap_pvalue(
    py: Python<'_>,
    fit: &PySeFit,
    observed: f64,
    n: usize,
    replicas: usize,
    weighted: bool,
    seed: u64,
) -> PyResult<f64> {
    let fit = fit.0.clone();
    py.detach(|| scaling::bootstrap_pvalue(&fit, observed, n, replicas, weighted, seed))
        .map(|o| o.p_value)
        .map_err(value_error)
}

/// `(tau0_center, mean, count)` per equal-occupancy predecessor bin.
#[pyfunction]
#[pyo3(signature = (intervals, nbins = 8))]
fn mean_conditional_interval(intervals: Vec<u64>, nbins: usize) -> PyResult<Vec<(f64, f64, usize)>> {
    let i = IntervalSeries::from_intervals(0.0, intervals).map_err(value_error)?;
    let curve = memory::mean_conditional_interval(&i, nbins).map_err(value_error)?;
    Ok(curve
        .bins
        .iter()
        .map(|b| (b.tau0_center, b.mean, b.count))
        .collect())
}

/// `(plus, minus)` lists of `(n, mean, count)` after runs of `n` intervals.
#[pyfunction]
#[pyo3(signature = (intervals, n_max = 10))]
#[allow(clippy::type_complexity)]
fn cluster_conditional_mean(
    intervals: Vec<u64>,
    n_max: usize,
) -> PyResult<(Vec<(usize, f64, usize)>, Vec<(usize, f64, usize)>)> {
    let i = IntervalSeries::from_intervals(0.0, intervals).map_err(value_error)?;
    let c = memory::cluster_conditional_mean(&i, n_max).map_err(value_error)?;
    let rows = |curve: &memory::ClusterCurve| {
        curve.points.iter().map(|p| (p.n, p.mean, p.count)).collect()
    };
    Ok((rows(&c.plus), rows(&c.minus)))
}

/// `(windows, F)` for `count` log-spaced window sizes.
#[pyfunction]
#[pyo3(signature = (series, lmin = 4, lmax = None, count = 20))]
fn dfa(
    series: Vec<f64>,
    lmin: usize,
    lmax: Option<usize>,
    count: usize,
) -> PyResult<(Vec<usize>, Vec<f64>)> {
    let windows = memory::log_spaced_windows(lmin, lmax.unwrap_or(series.len() / 4), count);
    let d = memory::dfa(&series, &windows).map_err(value_error)?;
    Ok((d.windows, d.fluctuations))
}

/// `(H_small, H_large)` from fits below and above `split`.
#[pyfunction]
#[pyo3(signature = (windows, fluctuations, split = 50))]
fn hurst_crossover(windows: Vec<usize>, fluctuations: Vec<f64>, split: usize) -> PyResult<(f64, f64)> {
    let d = memory::DfaResult {
        len: 0,
        windows,
        fluctuations,
    };
    let pair = memory::hurst_crossover(&d, split).map_err(value_error)?;
    Ok((pair.small.hurst, pair.large.hurst))
}

#[pyfunction]
fn fgn(hurst: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    surrogate::fgn(hurst, n, seed).map_err(value_error)
}

#[pyfunction]
fn student_returns(nu: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    surrogate::student_returns(nu, n, seed).map_err(value_error)
}

#[pyfunction]
fn long_memory_volatility(hurst: f64, nu: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    surrogate::long_memory_volatility(hurst, nu, n, seed)
        .map(|r| r.values)
        .map_err(value_error)
}

#[pyfunction]
fn shuffle(values: Vec<f64>, seed: u64) -> Vec<f64> {
    surrogate::shuffle(&values, seed)
}

/// Runs the pipeline on a TOML config and returns the JSON report.
#[pyfunction]
fn run_report(py: Python<'_>, config_toml: &str) -> PyResult<String> {
    let cfg = RunConfig::from_toml(config_toml).map_err(value_error)?;
    let bundle = py
        .detach(|| pipeline::run_pipeline(&cfg))
        .map_err(value_error)?;
    Ok(bundle.to_json())
}

/// `(table1_csv, table2_csv)` for a JSON report.
#[pyfunction]
fn render_tables(report_json: &str) -> PyResult<(String, String)> {
    let bundle = ReportBundle::from_json(report_json).map_err(value_error)?;
    let t = pipeline::render_tables(&bundle);
    Ok((t.table1, t.table2))
}

#[pymodule]
fn pyvolret(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<KsReport>()?;
    m.add_class::<PySeFit>()?;
    m.add_function(wrap_pyfunction!(preprocess, m)?)?;
    m.add_function(wrap_pyfunction!(extract_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(scale, m)?)?;
    m.add_function(wrap_pyfunction!(ks_two_sample, m)?)?;
    m.add_function(wrap_pyfunction!(critical_value, m)?)?;
    m.add_function(wrap_pyfunction!(crossing_significance, m)?)?;
    m.add_function(wrap_pyfunction!(fit_stretched_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(ks_gof, m)?)?;
    m.add_function(wrap_pyfunction!(ksw_gof, m)?)?;
    m.add_function(wrap_pyfunction!(bootstrap_pvalue, m)?)?;
    m.add_function(wrap_pyfunction!(mean_conditional_interval, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_conditional_mean, m)?)?;
    m.add_function(wrap_pyfunction!(dfa, m)?)?;
    m.add_function(wrap_pyfunction!(hurst_crossover, m)?)?;
    m.add_function(wrap_pyfunction!(fgn, m)?)?;
    m.add_function(wrap_pyfunction!(student_returns, m)?)?;
    m.add_function(wrap_pyfunction!(long_memory_volatility, m)?)?;
    m.add_function(wrap_pyfunction!(shuffle, m)?)?;
    m.add_function(wrap_pyfunction!(run_report, m)?)?;
    m.add_function(wrap_pyfunction!(render_tables, m)?)?;
    Ok(())
}
