//! Shared helpers and independent oracles for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 60)
}

/// `integrate` over `[0, 1e-8]` and then log-spaced panels up to `hi`.
pub fn integrate_log_panels(f: &dyn Fn(f64) -> f64, hi: f64, tol: f64) -> f64 {
    let mut total = integrate(f, 0.0, 1e-8, tol);
    let mut a = 1e-8;
    while a < hi {
        let b = (a * 2.0).min(hi);
        total += integrate(f, a, b, tol);
        a = b;
    }
    total
}

/// Independent normalizing constant `gamma alpha^(1/gamma) / Gamma(1/gamma)`
/// with `Gamma` from the Lanczos approximation (g = 7, n = 9).
pub fn se_normalizer(alpha: f64, gamma: f64) -> f64 {
    gamma * alpha.powf(1.0 / gamma) / gamma_fn(1.0 / gamma)
}

pub fn gamma_fn(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + G + 0.5;
        let mut a = C[0];
        for (k, c) in C.iter().enumerate().skip(1) {
            a += c / (x + k as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Quadrature oracle for the normalized stretched-exponential CDF.
pub fn se_cdf_quadrature(alpha: f64, gamma: f64, x: f64) -> f64 {
    let c = se_normalizer(alpha, gamma);
    // substitute u = t^(1/gamma) to remove the endpoint singularity of u^gamma
    let k = 1.0 / gamma;
    let upper = x.powf(gamma);
    let f = move |t: f64| {
        if t <= 0.0 {
            if k > 1.0 { 0.0 } else { c * k }
        } else {
            c * k * t.powf(k - 1.0) * (-alpha * t).exp()
        }
    };
    integrate(&f, 0.0, upper, 1e-14)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Synthetic minute bars with an intraday U-shape, random gaps and
/// day-to-day price jumps; returns the text and the number of days.
pub fn synthetic_minute_bars(days: usize, slots: usize, seed: u64) -> String {
    let mut rng = rng(seed);
    let mut out = String::from("date,minute_index,price\n");
    let mut log_price: f64 = 3.0;
    let start = chrono::NaiveDate::from_ymd_opt(2005, 1, 3).unwrap();
    for d in 0..days {
        let date = start + chrono::Duration::days(d as i64);
        // overnight jump that must never appear as a volatility value
        log_price += 0.5 * (rng.random::<f64>() - 0.5);
        for s in 0..slots {
            let u = s as f64 / (slots - 1) as f64;
            let sigma = 1e-3 * (1.0 + 3.0 * (2.0 * u - 1.0).powi(2));
            let z: f64 = rng.random::<f64>() - 0.5;
            log_price += sigma * z * 3.46;
            if s > 0 && rng.random::<f64>() < 0.02 {
                continue;
            }
            out.push_str(&format!("{},{},{:.10}\n", date, s, log_price.exp()));
        }
    }
    out
}

/// Lag-`k` sample autocorrelation.
pub fn autocorrelation(x: &[f64], k: usize) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v: f64 = x.iter().map(|a| (a - m) * (a - m)).sum();
    let c: f64 = x.windows(k + 1).map(|w| (w[0] - m) * (w[k] - m)).sum();
    c / v
}
