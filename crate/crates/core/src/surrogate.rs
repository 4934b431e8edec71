//! Seeded synthetic series with known statistical properties.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{StandardNormal, StudentT};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{IngestError, NormalizedVolatilitySeries};
use crate::scaling::{sample_se, ScalingError, SeFit};
use crate::seed;

const MIN_FGN_LEN: usize = 1 << 10;
/// Circulant eigenvalues above `-EIGEN_SLACK * max` are rounding noise.
const EIGEN_SLACK: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurrogateError {
    #[error("length {0} is not a power of two >= 1024")]
    InvalidLength(usize),
    #[error("circulant embedding has negative eigenvalue {0}")]
    EmbeddingFailure(f64),
    #[error("tail exponent {0} <= 2 gives infinite variance")]
    InfiniteVariance(f64),
    #[error("Hurst exponent {0} outside (0, 1)")]
    InvalidHurst(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("surrogate kind needs an input series")]
    MissingInput,
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
}

/// Uniform random permutation (Fisher-Yates), fixed by `seed`.
pub fn shuffle<T: Clone>(x: &[T], seed: u64) -> Vec<T> {
    let mut out = x.to_vec();
    out.shuffle(&mut seed::rng(seed));
    out
}

/// `rho(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Unit-variance fractional Gaussian noise by circulant embedding.
pub fn fgn(hurst: f64, n: usize, seed: u64) -> Result<Vec<f64>, SurrogateError> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(SurrogateError::InvalidHurst(hurst));
    }
    if n < MIN_FGN_LEN || !n.is_power_of_two() {
        return Err(SurrogateError::InvalidLength(n));
    }
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let k = if j <= n { j } else { m - j };
            Complex::new(fgn_autocovariance(hurst, k), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let largest = row.iter().map(|c| c.re).fold(0.0, f64::max);
    let mut rng = seed::rng(seed);
    let mut w: Vec<Complex<f64>> = Vec::with_capacity(m);
    for c in &row {
        let lambda = c.re;
        if lambda < -EIGEN_SLACK * largest {
            return Err(SurrogateError::EmbeddingFailure(lambda));
        }
        let amp = (lambda.max(0.0) / m as f64).sqrt();
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        w.push(Complex::new(amp * x, amp * y));
    }
    fft.process(&mut w);
    Ok(w[..n].iter().map(|c| c.re).collect())
}

/// I.i.d. Student-t draws scaled to unit variance; `nu = inf` gives N(0, 1).
pub fn student_returns(nu: f64, n: usize, seed: u64) -> Result<Vec<f64>, SurrogateError> {
    if nu.is_nan() || nu <= 2.0 {
        return Err(SurrogateError::InfiniteVariance(nu));
    }
    let mut rng = seed::rng(seed);
    if nu.is_infinite() {
        return Ok((0..n).map(|_| rng.sample(StandardNormal)).collect());
    }
    let dist = StudentT::new(nu).map_err(|e| SurrogateError::InvalidParameter(e.to_string()))?;
    let scale = (nu / (nu - 2.0)).sqrt();
    Ok((0..n).map(|_| rng.sample(dist) / scale).collect())
}

/// Volatility with the temporal ranks of fGn and the marginal of `|t_nu|`.
///
/// The value at the position of the `k`-th smallest fGn sample is the `k`-th
/// smallest absolute Student draw; the result is scaled to unit standard
/// deviation.
pub fn long_memory_volatility(
    hurst: f64,
    nu: f64,
    n: usize,
    seed: u64,
) -> Result<NormalizedVolatilitySeries, SurrogateError> {
    let g = fgn(hurst, n, seed::derive(seed, 1))?;
    let mut magnitudes: Vec<f64> = student_returns(nu, n, seed::derive(seed, 2))?
        .into_iter()
        .map(f64::abs)
        .collect();
    magnitudes.sort_by(f64::total_cmp);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
    let mut r = vec![0.0; n];
    for (rank, &pos) in order.iter().enumerate() {
        r[pos] = magnitudes[rank];
    }
    Ok(NormalizedVolatilitySeries::from_raw("surrogate", r)?)
}

/// Declarative description of a synthetic series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurrogateSpec {
    /// Permutation of an input series.
    Shuffle { seed: u64 },
    Fgn { hurst: f64, n: usize, seed: u64 },
    Student { nu: f64, n: usize, seed: u64 },
    /// Scaled intervals drawn from the normalized stretched exponential.
    SeIntervals { alpha: f64, gamma: f64, n: usize, seed: u64 },
    /// Volatility built by [`long_memory_volatility`].
    LongMemory { hurst: f64, nu: f64, n: usize, seed: u64 },
}

impl SurrogateSpec {
    pub fn generate(&self, input: Option<&[f64]>) -> Result<Vec<f64>, SurrogateError> {
        match *self {
            SurrogateSpec::Shuffle { seed } => {
                let x = input.ok_or(SurrogateError::MissingInput)?;
                if x.is_empty() {
                    return Err(SurrogateError::InvalidParameter("empty input".into()));
                }
                Ok(shuffle(x, seed))
            }
            SurrogateSpec::Fgn { hurst, n, seed } => fgn(hurst, n, seed),
            SurrogateSpec::Student { nu, n, seed } => {
                check_len(n)?;
                student_returns(nu, n, seed)
            }
            SurrogateSpec::SeIntervals { alpha, gamma, n, seed } => {
                check_len(n)?;
                let fit = SeFit::from_parameters(alpha, gamma)?;
                Ok(sample_se(&fit, n, seed).values)
            }
            SurrogateSpec::LongMemory { hurst, nu, n, seed } => {
                Ok(long_memory_volatility(hurst, nu, n, seed)?.values)
            }
        }
    }
}

fn check_len(n: usize) -> Result<(), SurrogateError> {
    if n < 2 {
        return Err(SurrogateError::InvalidParameter(format!("length {n} < 2")));
    }
    Ok(())
}
