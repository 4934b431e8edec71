//! The stretched-exponential scaling function `f(x) = c exp(-alpha x^gamma)`.
//!
//! With the normalizing prefactor `c = gamma alpha^(1/gamma) / Gamma(1/gamma)`
//! the substitution `y = alpha x^gamma` turns `f` into a Gamma(1/gamma)
//! density in `y`, so the CDF is the regularized lower incomplete gamma
//! function `P(1/gamma, alpha x^gamma)`.

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{checked_gamma_lr, checked_gamma_ur, ln_gamma};

use super::ScalingError;
use crate::intervals::ScaledIntervals;
use crate::seed;

/// Inversion stops once `|P(a, y) - u|` drops below this.
const INVERSION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeFit {
    /// Prefactor as fitted; equals `normalized_c` when `c_free` is false.
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Prefactor that makes the density integrate to one.
    pub normalized_c: f64,
    /// Whether `c` was a free fit parameter.
    pub c_free: bool,
    /// Range of the data used by the fit.
    pub domain: (f64, f64),
    /// Sum of squared log-density residuals (0 for analytic models).
    pub loss: f64,
    /// Number of histogram bins entering the fit.
    pub bins_used: usize,
}

pub(crate) fn check_parameters(alpha: f64, gamma: f64) -> Result<(), ScalingError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(ScalingError::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(ScalingError::InvalidParameter(format!(
            "gamma must lie in (0, 2], got {gamma}"
        )));
    }
    Ok(())
}

pub(crate) fn normalizing_constant(alpha: f64, gamma: f64) -> f64 {
    (gamma.ln() + alpha.ln() / gamma - ln_gamma(1.0 / gamma)).exp()
}

impl SeFit {
    /// Normalized model with the given shape parameters.
    pub fn from_parameters(alpha: f64, gamma: f64) -> Result<Self, ScalingError> {
        check_parameters(alpha, gamma)?;
        let c = normalizing_constant(alpha, gamma);
        Ok(Self {
            c,
            alpha,
            gamma,
            normalized_c: c,
            c_free: false,
            domain: (0.0, f64::INFINITY),
            loss: 0.0,
            bins_used: 0,
        })
    }

    /// Normalized model with unit mean, the natural law for scaled intervals:
    /// `alpha = (Gamma(2/gamma) / Gamma(1/gamma))^gamma`.
    pub fn unit_mean(gamma: f64) -> Result<Self, ScalingError> {
        check_parameters(1.0, gamma)?;
        let alpha = (gamma * (ln_gamma(2.0 / gamma) - ln_gamma(1.0 / gamma))).exp();
        Self::from_parameters(alpha, gamma)
    }

    /// Ratio applied to the fitted prefactor to normalize the density.
    pub fn renormalization(&self) -> f64 {
        self.normalized_c / self.c
    }

    /// Normalized density.
    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.normalized_c * (-self.alpha * x.powf(self.gamma)).exp()
        }
    }

    /// Density with the prefactor as fitted.
    pub fn fitted_density(&self, x: f64) -> f64 {
        self.c * (-self.alpha * x.powf(self.gamma)).exp()
    }

    /// `Gamma(2/gamma) / (alpha^(1/gamma) Gamma(1/gamma))`.
    pub fn mean(&self) -> f64 {
        let g = self.gamma;
        (ln_gamma(2.0 / g) - ln_gamma(1.0 / g) - self.alpha.ln() / g).exp()
    }

    fn shape(&self) -> f64 {
        1.0 / self.gamma
    }
}

fn lower_regularized(a: f64, y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else if y.is_infinite() {
        1.0
    } else {
        checked_gamma_lr(a, y).unwrap_or(f64::NAN)
    }
}

fn upper_regularized(a: f64, y: f64) -> f64 {
    if y <= 0.0 {
        1.0
    } else if y.is_infinite() {
        0.0
    } else {
        checked_gamma_ur(a, y).unwrap_or(f64::NAN)
    }
}

/// `F_SE(x) = P(1/gamma, alpha x^gamma)`.
pub fn se_cdf(fit: &SeFit, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    lower_regularized(fit.shape(), fit.alpha * x.powf(fit.gamma))
}

/// `1 - F_SE(x)`, accurate in the far tail.
pub fn se_ccdf(fit: &SeFit, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    upper_regularized(fit.shape(), fit.alpha * x.powf(fit.gamma))
}

/// Solves `P(a, y) = u` by Newton steps safeguarded with bisection.
fn invert_lower_regularized(a: f64, u: f64) -> f64 {
    let ln_gamma_a = ln_gamma(a);
    let mut lo = 0.0_f64;
    let mut hi = a.max(1.0);
    while lower_regularized(a, hi) < u {
        lo = hi;
        hi *= 2.0;
    }
    // small-y expansion P(a, y) ~ y^a / Gamma(a + 1)
    let guess = ((u.ln() + ln_gamma_a + a.ln()) / a).exp();
    let mut y = if guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let g = lower_regularized(a, y) - u;
        if g.abs() < INVERSION_TOLERANCE {
            break;
        }
        if g < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let density = ((a - 1.0) * y.ln() - y - ln_gamma_a).exp();
        let newton = y - g / density;
        y = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    y
}

/// Quantile function of the normalized model.
pub fn se_quantile(fit: &SeFit, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let y = invert_lower_regularized(fit.shape(), u);
    (y / fit.alpha).powf(fit.shape())
}

/// Draws `n` i.i.d. values by inverting `se_cdf` at open-interval uniforms.
/// The stream is fully determined by `seed`.
pub fn sample_se(fit: &SeFit, n: usize, seed: u64) -> ScaledIntervals {
    let mut rng = seed::rng(seed);
    let values = (0..n)
        .map(|_| {
            let u: f64 = rng.sample(Open01);
            se_quantile(fit, u)
        })
        .collect();
    ScaledIntervals::new(values, None)
}
