use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use volret::ingest::{parse_minute_bars, preprocess, GridSpec, NormalizedVolatilitySeries};
use volret::intervals::{extract_intervals, scale, IntervalSeries, ScaledIntervals};
use volret::memory::{
    cluster_conditional_mean, conditional_pdf, dfa, hurst_crossover, log_spaced_windows,
    mean_conditional_interval,
};
use volret::pipeline::{
    render_tables, run_pipeline, PipelineError, RunConfig, TABLE1_HEADER, TABLE2_HEADER,
};
use volret::scaling::{
    fit_stretched_exponential_with, goodness_of_fit, ks_two_sample, log_binned_density, FitOptions,
};
use volret::surrogate::SurrogateSpec;

#[derive(Parser)]
#[command(name = "volret", version, about = "Volatility return-interval analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SeriesArgs {
    /// Minute bars `date,minute_index,price`.
    #[arg(long, conflicts_with = "series", required_unless_present = "series")]
    prices: Option<PathBuf>,
    /// Normalized volatility, one value per line (last column is used).
    #[arg(long)]
    series: Option<PathBuf>,
    #[arg(long, default_value = "series")]
    symbol: String,
    /// Slots per trading day.
    #[arg(long, default_value_t = 240)]
    slots: usize,
    /// Comma-separated session lengths in minutes.
    #[arg(long, value_delimiter = ',', default_value = "120,120")]
    sessions: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the normalized volatility `t<TAB>r`.
    Preprocess {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Return intervals `q<TAB>tau` for each threshold.
    Intervals {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        q: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-sample KS test of scaled intervals at two thresholds (CSV).
    ScalingTest {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, default_value_t = 2.0)]
        q_low: f64,
        #[arg(long, default_value_t = 5.0)]
        q_high: f64,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
    },
    /// Stretched-exponential fit to the pooled scaled intervals (JSON).
    Fit {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        q: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        bins_per_decade: usize,
        /// Binned PDF with the fitted curve, `x density count fit normalized`.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Bootstrap goodness-of-fit p-values (CSV).
    Gof {
        #[command(flatten)]
        input: SeriesArgs,
        /// Thresholds pooled for the fit.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        q: Vec<f64>,
        /// Thresholds tested.
        #[arg(long, value_delimiter = ',', default_value = "2,5")]
        test_q: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Conditional PDFs, conditional means and cluster curves as TSV.
    Memory {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 4)]
        pdf_bins: usize,
        #[arg(long, default_value_t = 8)]
        mean_bins: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Directory for the three TSV files; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detrended fluctuation analysis `l<TAB>F(l)` plus a JSON Hurst record.
    Dfa {
        #[command(flatten)]
        input: SeriesArgs,
        /// Analyse the intervals at this threshold instead of the series itself.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 4)]
        lmin: usize,
        /// Defaults to a quarter of the analysed length.
        #[arg(long)]
        lmax: Option<usize>,
        #[arg(long, default_value_t = 20)]
        nl: usize,
        #[arg(long, default_value_t = 50)]
        split: usize,
        /// Write the JSON record here instead of a trailing `#` line.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Synthetic series, one value per line.
    Surrogate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "H", default_value_t = 0.8)]
        hurst: f64,
        #[arg(long, default_value_t = 3.5)]
        nu: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.31)]
        gamma: f64,
        #[arg(long, default_value_t = 65536)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Series to permute for `--kind shuffle`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline from a TOML config; writes report.json, table1.csv, table2.csv.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Shuffle,
    Fgn,
    Student,
    SeIntervals,
    LongMemory,
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn run(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: e.to_string() }
    }

    fn config(e: impl std::fmt::Display) -> Self {
        Self { code: 2, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::run(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::run(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// One value per line, last column; a non-numeric first line is a header.
fn parse_values(text: &str) -> CliResult<Vec<f64>> {
    let mut values = Vec::new();
    let lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    for (k, (line_no, l)) in lines.enumerate() {
        let field = l.split(['\t', ',', ' ']).rfind(|f| !f.is_empty()).unwrap_or("");
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if k == 0 => {}
            Err(_) => {
                return Err(Failure::run(format!("line {}: not a number: {field:?}", line_no + 1)))
            }
        }
    }
    Ok(values)
}

fn load(args: &SeriesArgs) -> CliResult<NormalizedVolatilitySeries> {
    if let Some(path) = &args.prices {
        let grid = GridSpec::new(args.slots, args.sessions.clone()).map_err(Failure::config)?;
        let prices = parse_minute_bars(&args.symbol, &read(path)?, &grid).map_err(Failure::run)?;
        preprocess(&prices).map_err(Failure::run)
    } else {
        let path = args.series.as_ref().expect("clap requires one input");
        let values = parse_values(&read(path)?)?;
        NormalizedVolatilitySeries::from_raw(&args.symbol, values).map_err(Failure::run)
    }
}

fn intervals_at(r: &NormalizedVolatilitySeries, q: f64) -> CliResult<IntervalSeries> {
    extract_intervals(r, q).map_err(|e| Failure::run(format!("q = {q}: {e}")))
}

fn scaled_at(r: &NormalizedVolatilitySeries, qs: &[f64]) -> CliResult<Vec<ScaledIntervals>> {
    qs.iter().map(|&q| intervals_at(r, q).map(|i| scale(&i))).collect()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Preprocess { input, out } => {
            let r = load(&input)?;
            let mut s = String::from("t\tr\n");
            for (t, v) in r.values.iter().enumerate() {
                let _ = writeln!(s, "{t}\t{v}");
            }
            emit(out.as_deref(), &s)
        }
        Command::Intervals { input, q, out } => {
            let r = load(&input)?;
            let mut s = String::from("q\ttau\n");
            for q in q {
                for tau in intervals_at(&r, q)?.intervals {
                    let _ = writeln!(s, "{q}\t{tau}");
                }
            }
            emit(out.as_deref(), &s)
        }
        Command::ScalingTest { input, q_low, q_high, level } => {
            let r = load(&input)?;
            let low = scale(&intervals_at(&r, q_low)?);
            let high = scale(&intervals_at(&r, q_high)?);
            let rep = ks_two_sample(&low, &high, level).map_err(Failure::config)?;
            let yes = if rep.verdict.is_accept() { "Yes" } else { "No" };
            emit(
                None,
                &format!(
                    "{TABLE1_HEADER}\n{},{:.4},{:.4},{yes}\n",
                    input.symbol, rep.statistic, rep.critical_value
                ),
            )
        }
        Command::Fit { input, q, bins_per_decade, curve } => {
            let r = load(&input)?;
            let options = FitOptions { bins_per_decade, ..FitOptions::default() };
            let scaled = scaled_at(&r, &q)?;
            let fit = fit_stretched_exponential_with(&scaled, &options).map_err(Failure::run)?;
            if let Some(path) = curve {
                let pooled: Vec<f64> = scaled.iter().flat_map(|s| s.values.iter().copied()).collect();
                let pdf = log_binned_density(&pooled, bins_per_decade).map_err(Failure::run)?;
                let mut s = String::from("x\tdensity\tcount\tfit\tnormalized\n");
                for b in &pdf.bins {
                    let _ = writeln!(
                        s,
                        "{}\t{}\t{}\t{}\t{}",
                        b.center,
                        b.density,
                        b.count,
                        fit.fitted_density(b.center),
                        fit.density(b.center)
                    );
                }
                emit(Some(&path), &s)?;
            }
            emit(None, &json(&fit))
        }
        Command::Gof { input, q, test_q, replicas, seed } => {
            let r = load(&input)?;
            let fit = fit_stretched_exponential_with(&scaled_at(&r, &q)?, &FitOptions::default())
                .map_err(Failure::run)?;
            let mut s = format!("{TABLE2_HEADER}\n");
            for (k, x) in scaled_at(&r, &test_q)?.iter().enumerate() {
                let seed = volret::seed::derive(seed, k as u64);
                let g = goodness_of_fit(x, &fit, replicas, seed).map_err(Failure::run)?;
                let _ = writeln!(s, "{},{},{:.4},{:.4}", input.symbol, test_q[k], g.p_ks, g.p_ksw);
            }
            emit(None, &s)
        }
        Command::Memory { input, q, pdf_bins, mean_bins, n_max, out } => {
            let r = load(&input)?;
            let i = intervals_at(&r, q)?;
            let pdf = conditional_pdf(&i, pdf_bins).map_err(Failure::run)?;
            let mean = mean_conditional_interval(&i, mean_bins).map_err(Failure::run)?;
            let clusters = cluster_conditional_mean(&i, n_max).map_err(Failure::run)?;

            let mut pdf_tsv = String::from("bin\ttau0_lo\ttau0_hi\tx\tdensity\tcount\n");
            for (b, bin) in pdf.bins.iter().enumerate() {
                for p in &bin.pdf.bins {
                    let _ = writeln!(
                        pdf_tsv,
                        "{b}\t{}\t{}\t{}\t{}\t{}",
                        bin.tau0_range.0, bin.tau0_range.1, p.center, p.density, p.count
                    );
                }
            }
            let mut mean_tsv = String::from("tau0\tmean\tstd_err\tcount\n");
            for b in &mean.bins {
                let _ = writeln!(mean_tsv, "{}\t{}\t{}\t{}", b.tau0_center, b.mean, b.std_err, b.count);
            }
            let mut cluster_tsv = String::from("sign\tn\tmean\tstd_err\tcount\n");
            for c in [&clusters.plus, &clusters.minus] {
                for p in &c.points {
                    let _ = writeln!(cluster_tsv, "{}\t{}\t{}\t{}\t{}", c.side, p.n, p.mean, p.std_err, p.count);
                }
            }
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(Failure::run)?;
                    emit(Some(&dir.join("conditional_pdf.tsv")), &pdf_tsv)?;
                    emit(Some(&dir.join("conditional_mean.tsv")), &mean_tsv)?;
                    emit(Some(&dir.join("clusters.tsv")), &cluster_tsv)
                }
                None => emit(
                    None,
                    &format!(
                        "# conditional_pdf\n{pdf_tsv}\n# conditional_mean\n{mean_tsv}\n# clusters\n{cluster_tsv}"
                    ),
                ),
            }
        }
        Command::Dfa { input, q, lmin, lmax, nl, split, json: json_out } => {
            let r = load(&input)?;
            let x = match q {
                Some(q) => intervals_at(&r, q)?.as_f64(),
                None => r.values.clone(),
            };
            let windows = log_spaced_windows(lmin, lmax.unwrap_or(x.len() / 4), nl);
            let d = dfa(&x, &windows).map_err(Failure::config)?;
            let h = hurst_crossover(&d, split).map_err(Failure::run)?;
            let mut s = String::from("l\tF\n");
            for (l, f) in d.windows.iter().zip(&d.fluctuations) {
                let _ = writeln!(s, "{l}\t{f}");
            }
            let record = serde_json::json!({
                "H_small": h.small.hurst,
                "H_large": h.large.hurst,
                "stderr_small": h.small.stderr,
                "stderr_large": h.large.stderr,
            });
            match json_out {
                Some(p) => {
                    emit(Some(&p), &format!("{record}\n"))?;
                    emit(None, &s)
                }
                None => emit(None, &format!("{s}# {record}\n")),
            }
        }
        Command::Surrogate { kind, hurst, nu, alpha, gamma, n, seed, input, out } => {
            let spec = match kind {
                Kind::Shuffle => SurrogateSpec::Shuffle { seed },
                Kind::Fgn => SurrogateSpec::Fgn { hurst, n, seed },
                Kind::Student => SurrogateSpec::Student { nu, n, seed },
                Kind::SeIntervals => SurrogateSpec::SeIntervals { alpha, gamma, n, seed },
                Kind::LongMemory => SurrogateSpec::LongMemory { hurst, nu, n, seed },
            };
            let source = match &input {
                Some(p) => Some(parse_values(&read(p)?)?),
                None => None,
            };
            let values = spec.generate(source.as_deref()).map_err(Failure::config)?;
            let mut s = String::with_capacity(values.len() * 20);
            for v in values {
                let _ = writeln!(s, "{v}");
            }
            emit(out.as_deref(), &s)
        }
        Command::Report { config, seed, replicas, workers, out } => {
            let mut cfg = RunConfig::load(&config).map_err(|e| match e {
                PipelineError::Io { .. } => Failure::run(e),
                _ => Failure::config(e),
            })?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(b) = replicas {
                cfg.bootstrap_replicas = b;
            }
            if workers.is_some() {
                cfg.workers = workers;
            }
            if out.is_some() {
                cfg.output_dir = out;
            }
            cfg.validate().map_err(Failure::config)?;
            let bundle = run_pipeline(&cfg).map_err(Failure::config)?;
            let tables = render_tables(&bundle);
            match &cfg.output_dir {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(Failure::run)?;
                    emit(Some(&dir.join("report.json")), &bundle.to_json())?;
                    emit(Some(&dir.join("table1.csv")), &tables.table1)?;
                    emit(Some(&dir.join("table2.csv")), &tables.table2)?;
                }
                None => emit(None, &format!("{}\n{}", tables.table1, tables.table2))?,
            }
            if bundle.has_errors() {
                for s in bundle.symbols.iter().filter(|s| s.has_errors()) {
                    eprintln!("{}: one or more sections failed, see report", s.symbol);
                }
                return Err(Failure { code: 1, message: String::new() });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
