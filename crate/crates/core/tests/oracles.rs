//! Scaling-layer results checked against oracles built in this file.

mod common;

use rand::Rng;
use volret::intervals::{intervals_from_values, ScaledIntervals};
use volret::scaling::{
    fit_stretched_exponential, ks_gof, ks_two_sample, sample_se, scaling_verdict, se_cdf,
    PValues, SeFit, Verdict,
};
use volret::seed;

#[test]
fn cdf_agrees_with_quadrature() {
    for &gamma in &[0.3, 0.5, 1.0] {
        for &alpha in &[0.5, 1.0, 4.0] {
            let m = SeFit::from_parameters(alpha, gamma).unwrap();
            for k in 0..30 {
                let x = 1e-2 * 1.4_f64.powi(k);
                let q = common::se_cdf_quadrature(alpha, gamma, x);
                assert!(
                    (se_cdf(&m, x) - q).abs() < 1e-8,
                    "alpha {alpha} gamma {gamma} x {x}: {} vs {q}",
                    se_cdf(&m, x)
                );
            }
        }
    }
}

#[test]
fn normalizer_matches_lanczos_gamma() {
    for &gamma in &[0.22, 0.31, 0.44, 1.0] {
        let m = SeFit::unit_mean(gamma).unwrap();
        let c = common::se_normalizer(m.alpha, gamma);
        assert!((m.normalized_c / c - 1.0).abs() < 1e-12);
        let mass = common::integrate_log_panels(&|x| m.density(x), 1e6, 1e-13);
        let mean = common::integrate_log_panels(&|x| x * m.density(x), 1e6, 1e-13);
        assert!((mass - 1.0).abs() < 1e-6, "gamma {gamma}: mass {mass}");
        assert!((mean - 1.0).abs() < 1e-6, "gamma {gamma}: mean {mean}");
    }
}

#[test]
fn fit_recovers_gamma() {
    for (k, &gamma) in [0.25, 0.31, 0.44].iter().enumerate() {
        let model = SeFit::unit_mean(gamma).unwrap();
        let x = sample_se(&model, 100_000, 40 + k as u64);
        let fit = fit_stretched_exponential(&[x]).unwrap();
        assert!((fit.gamma - gamma).abs() <= 0.03, "gamma {gamma}: fitted {}", fit.gamma);
    }
}

#[test]
fn fit_recovers_exponential_from_log_uniforms() {
    let mut rng = common::rng(17);
    let x: Vec<f64> = (0..100_000)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .filter(|v| *v > 0.0)
        .collect();
    let fit = fit_stretched_exponential(&[ScaledIntervals::new(x, None)]).unwrap();
    assert!((fit.gamma - 1.0).abs() <= 0.05, "gamma {}", fit.gamma);
    assert!((fit.alpha - 1.0).abs() <= 0.1, "alpha {}", fit.alpha);
}

#[test]
fn inverse_cdf_sample_follows_the_model() {
    let model = SeFit::unit_mean(0.31).unwrap();
    let x = sample_se(&model, 200_000, 3);
    assert!(ks_gof(&x, &model).unwrap() < 0.005);
    let mean = x.values.iter().sum::<f64>() / x.len() as f64;
    assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
}

#[test]
fn same_law_samples_pass_two_sample_test() {
    let model = SeFit::unit_mean(0.31).unwrap();
    let accepted = (0..200u64)
        .filter(|&t| {
            let a = sample_se(&model, 5000, seed::derive(21, 2 * t));
            let b = sample_se(&model, 5000, seed::derive(21, 2 * t + 1));
            ks_two_sample(&a, &b, 0.05).unwrap().verdict.is_accept()
        })
        .count();
    assert!(accepted >= 180, "accepted {accepted}/200");
}

#[test]
fn pvalue_decision_fixtures() {
    let pv = |ks: f64, ksw: f64| PValues { ks, ksw };
    let stock_000625 = [(2.0, pv(0.224, 0.5)), (5.0, pv(0.045, 0.5))];
    assert_eq!(scaling_verdict(&stock_000625, 0.05).unwrap().ks, Verdict::Reject);
    assert_eq!(scaling_verdict(&stock_000625, 0.01).unwrap().ks, Verdict::Accept);
    let stock_600602 = [(2.0, pv(0.995, 0.9)), (5.0, pv(0.996, 0.9))];
    for level in [0.05, 0.01] {
        let v = scaling_verdict(&stock_600602, level).unwrap();
        assert_eq!(v.ks, Verdict::Accept);
        assert_eq!(v.ksw, Verdict::Accept);
    }
}

#[test]
fn iid_mean_interval_is_inverse_rate() {
    let mut rng = common::rng(5);
    let u: Vec<f64> = (0..1_000_000).map(|_| rng.random::<f64>()).collect();
    for p in [0.01, 0.001] {
        let i = intervals_from_values(&u, 1.0 - p).unwrap();
        let p_hat = u.iter().filter(|&&v| v > 1.0 - p).count() as f64 / u.len() as f64;
        assert!((i.mean * p_hat - 1.0).abs() < 0.05, "p {p}: mean {}", i.mean);
    }
    // one-percent binomial noise at p = 0.01
    let i = intervals_from_values(&u, 0.99).unwrap();
    assert!((i.mean * 0.01 - 1.0).abs() < 0.05, "mean {}", i.mean);
}
