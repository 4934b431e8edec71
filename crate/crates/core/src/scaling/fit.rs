//! Least-squares fit of the stretched exponential to a log-binned density.
//!
//! For fixed `gamma`, `ln f(x) = ln c - alpha x^gamma` is linear in
//! `(ln c, alpha)`, so those two are solved exactly and only the profile loss
//! in `gamma` is searched numerically.

use serde::{Deserialize, Serialize};

use super::stretched::normalizing_constant;
use super::{log_binned_density, ScalingError, SeFit};
use crate::intervals::ScaledIntervals;
use crate::stats::fit_line;

const MIN_SAMPLES: usize = 100;
const MIN_BINS: usize = 5;
const GAMMA_FLOOR: f64 = 1e-3;
const GAMMA_CEIL: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub bins_per_decade: usize,
    /// Bins with fewer counts are left out of the fit.
    pub min_bin_count: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            bins_per_decade: 10,
            min_bin_count: 5,
        }
    }
}

struct Profile {
    x: Vec<f64>,
    log_density: Vec<f64>,
}

struct LinearSolution {
    log_c: f64,
    alpha: f64,
    loss: f64,
}

impl Profile {
    fn solve(&self, gamma: f64) -> Option<LinearSolution> {
        let z: Vec<f64> = self.x.iter().map(|x| -x.powf(gamma)).collect();
        let line = fit_line(&z, &self.log_density)?;
        let loss = z
            .iter()
            .zip(&self.log_density)
            .map(|(z, y)| (y - line.intercept - line.slope * z).powi(2))
            .sum::<f64>();
        loss.is_finite().then_some(LinearSolution {
            log_c: line.intercept,
            alpha: line.slope,
            loss,
        })
    }

    fn loss(&self, gamma: f64) -> f64 {
        self.solve(gamma).map_or(f64::INFINITY, |s| s.loss)
    }

    /// Pattern search from `start`, halving the step until it is negligible.
    fn descend(&self, start: f64) -> (f64, f64) {
        let mut gamma = start;
        let mut loss = self.loss(gamma);
        let mut step = 0.05;
        let mut iterations = 0;
        while step > 1e-10 && iterations < 10_000 {
            iterations += 1;
            let up = (gamma + step).min(GAMMA_CEIL);
            let down = (gamma - step).max(GAMMA_FLOOR);
            let (l_up, l_down) = (self.loss(up), self.loss(down));
            if l_up < loss && l_up <= l_down {
                gamma = up;
                loss = l_up;
            } else if l_down < loss {
                gamma = down;
                loss = l_down;
            } else {
                step *= 0.5;
            }
        }
        (gamma, loss)
    }
}

pub fn fit_stretched_exponential(samples: &[ScaledIntervals]) -> Result<SeFit, ScalingError> {
    fit_stretched_exponential_with(samples, &FitOptions::default())
}

/// Fits `c exp(-alpha x^gamma)` to the pooled log-binned density of `samples`.
///
/// The loss is the sum of squared differences of log densities over bins
/// with at least `min_bin_count` counts. `gamma` is searched in `(0, 2]` from
/// the starts `0.1, 0.2, ..., 1.0` and the best local minimum wins.
pub fn fit_stretched_exponential_with(
    samples: &[ScaledIntervals],
    options: &FitOptions,
) -> Result<SeFit, ScalingError> {
    let pooled: Vec<f64> = samples.iter().flat_map(|s| s.values.iter().copied()).collect();
    if pooled.len() < MIN_SAMPLES {
        return Err(ScalingError::TooFewSamples {
            needed: MIN_SAMPLES,
            found: pooled.len(),
        });
    }
    let pdf = log_binned_density(&pooled, options.bins_per_decade)?;
    let used: Vec<_> = pdf
        .bins
        .iter()
        .filter(|b| b.count >= options.min_bin_count)
        .collect();
    if used.len() < MIN_BINS {
        return Err(ScalingError::InsufficientSupport {
            needed: MIN_BINS,
            found: used.len(),
        });
    }
    let profile = Profile {
        x: used.iter().map(|b| b.center).collect(),
        log_density: used.iter().map(|b| b.density.ln()).collect(),
    };

    let mut best: Option<(f64, f64)> = None;
    for k in 1..=10 {
        let (gamma, loss) = profile.descend(k as f64 * 0.1);
        if loss.is_finite() && best.is_none_or(|(_, l)| loss < l) {
            best = Some((gamma, loss));
        }
    }
    let (gamma, loss) = best.ok_or_else(|| ScalingError::FitDiverged("no finite loss".into()))?;
    let solution = profile
        .solve(gamma)
        .ok_or_else(|| ScalingError::FitDiverged("degenerate design".into()))?;
    if !(solution.alpha > 0.0) || !solution.log_c.is_finite() {
        return Err(ScalingError::FitDiverged(format!(
            "best fit has non-decaying alpha = {}",
            solution.alpha
        )));
    }

    Ok(SeFit {
        c: solution.log_c.exp(),
        alpha: solution.alpha,
        gamma,
        normalized_c: normalizing_constant(solution.alpha, gamma),
        c_free: true,
        domain: (used[0].lower, used[used.len() - 1].upper),
        loss,
        bins_used: used.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::sample_se;

    #[test]
    fn recovers_exponential() {
        let truth = SeFit::from_parameters(1.0, 1.0).unwrap();
        let s = sample_se(&truth, 100_000, 17);
        let fit = fit_stretched_exponential(&[s]).unwrap();
        assert!((fit.gamma - 1.0).abs() < 0.05, "{fit:?}");
        assert!((fit.alpha - 1.0).abs() < 0.1, "{fit:?}");
        assert!(fit.c_free);
        assert!((fit.renormalization() - 1.0).abs() < 0.1);
    }

    #[test]
    fn pools_several_samples() {
        let truth = SeFit::unit_mean(0.5).unwrap();
        let parts: Vec<_> = (0..4).map(|k| sample_se(&truth, 20_000, k)).collect();
        let fit = fit_stretched_exponential(&parts).unwrap();
        assert!((fit.gamma - 0.5).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn rejects_small_or_narrow_samples() {
        let few = ScaledIntervals::new(vec![1.0; 50], None);
        assert!(matches!(
            fit_stretched_exponential(&[few]),
            Err(ScalingError::TooFewSamples { found: 50, .. })
        ));
        let narrow = ScaledIntervals::new((0..500).map(|k| 1.0 + (k % 3) as f64 * 0.01).collect(), None);
        assert!(matches!(
            fit_stretched_exponential(&[narrow]),
            Err(ScalingError::InsufficientSupport { .. })
        ));
    }
}
