//! Empirical-distribution statistics and their asymptotic null distributions.

use std::f64::consts::PI;

use crate::numerics::{bessel_k_scaled, log_gamma};

/// Probabilities are kept this far from 0 and 1 before taking logarithms.
pub const CDF_CLAMP: f64 = 1e-12;

fn sorted_cdf<F: Fn(f64) -> f64>(cdf: F, sample: &[f64]) -> Vec<f64> {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    xs.into_iter().map(cdf).collect()
}

/// Kolmogorov–Smirnov distance `Dₙ` between the empirical and model cdf.
pub fn ks_statistic<F: Fn(f64) -> f64>(cdf: F, sample: &[f64]) -> f64 {
    let u = sorted_cdf(cdf, sample);
    let n = u.len() as f64;
    u.iter().enumerate().fold(0.0, |d, (i, &f)| {
        let i = i as f64;
        d.max((i + 1.0) / n - f).max(f - i / n)
    })
}

/// Cramér–von Mises `W²`.
pub fn cvm_statistic<F: Fn(f64) -> f64>(cdf: F, sample: &[f64]) -> f64 {
    let u = sorted_cdf(cdf, sample);
    let n = u.len() as f64;
    let s: f64 = u.iter().enumerate().map(|(i, &f)| (f - (2.0 * i as f64 + 1.0) / (2.0 * n)).powi(2)).sum();
    1.0 / (12.0 * n) + s
}

/// Anderson–Darling `A²`, with model probabilities clamped to `[ε, 1−ε]`.
pub fn ad_statistic<F: Fn(f64) -> f64>(cdf: F, sample: &[f64]) -> f64 {
    let u: Vec<f64> = sorted_cdf(cdf, sample).into_iter().map(|f| f.clamp(CDF_CLAMP, 1.0 - CDF_CLAMP)).collect();
    let n = u.len();
    let s: f64 = (0..n).map(|i| (2 * i + 1) as f64 * (u[i].ln() + (-u[n - 1 - i]).ln_1p())).sum();
    -(n as f64) - s / n as f64
}

/// Upper tail of the Kolmogorov distribution, `P(K > x)`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // theta-function form, fast for small x
        let c = PI * PI / (8.0 * x * x);
        let s: f64 = (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum();
        return (1.0 - (2.0 * PI).sqrt() / x * s).clamp(0.0, 1.0);
    }
    let s: f64 = (1..=100)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * (k * k) as f64 * x * x).exp()
        })
        .sum();
    (2.0 * s).clamp(0.0, 1.0)
}

/// Asymptotic K-S p-value with the `√n + 0.12 + 0.11/√n` scaling.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)
}

fn bessel_k_exp(nu: f64, z: f64) -> f64 {
    // e^{-z} K_ν(z)
    if z > 700.0 {
        return 0.0;
    }
    bessel_k_scaled(nu, z).map(|k| k * (-2.0 * z).exp()).unwrap_or(0.0)
}

/// Limiting null cdf of `W²` (Anderson and Darling's Bessel series).
pub fn cvm_limit_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    for k in 0..50 {
        let kf = k as f64;
        let u = (log_gamma(kf + 0.5).expect("positive") - log_gamma(kf + 1.0).expect("positive")).exp()
            / (PI.powf(1.5) * x.sqrt());
        let y = 4.0 * kf + 1.0;
        let q = y * y / (16.0 * x);
        let term = u * y.sqrt() * bessel_k_exp(0.25, q);
        total += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    total.min(1.0)
}

fn ed2(y: f64) -> f64 {
    let z = y * y / 4.0;
    (y / 2.0).powf(1.5) * (bessel_k_exp(0.25, z) + bessel_k_exp(0.75, z)) / PI.sqrt()
}

fn ed3(y: f64) -> f64 {
    let z = y * y / 4.0;
    (y / 2.0).powf(2.5) * (2.0 * bessel_k_exp(0.25, z) + 3.0 * bessel_k_exp(0.75, z) - bessel_k_exp(1.25, z)) / PI.sqrt()
}

/// First-order finite-sample correction term of Csörgő and Faraway.
fn cvm_correction(x: f64) -> f64 {
    let gamma = |a: f64| log_gamma(a).expect("positive").exp();
    let sx = 2.0 * x.sqrt();
    let (y1, y2) = (x.powf(0.75), x.powf(1.25));
    let mut total = 0.0;
    for k in 0..50 {
        let kf = k as f64;
        let m = 2.0 * kf + 1.0;
        let g = gamma(kf + 0.5);
        let a = m * g * ed2((4.0 * kf + 3.0) / sx) / (9.0 * y1)
            + g * ed3((4.0 * kf + 1.0) / sx) / (72.0 * y2)
            + 2.0 * (m + 2.0) * gamma(kf + 1.5) * ed3((4.0 * kf + 5.0) / sx) / (12.0 * y2)
            + 7.0 * m * g * ed2((4.0 * kf + 1.0) / sx) / (144.0 * y1)
            + 7.0 * m * g * ed2((4.0 * kf + 5.0) / sx) / (144.0 * y1);
        let z = -a / (PI * gamma(kf + 1.0));
        total += z;
        if z.abs() < 1e-10 {
            break;
        }
    }
    total
}

/// Finite-sample null cdf of `W²` for a fully specified model.
pub fn cvm_cdf(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    if x <= 1.0 / (12.0 * nf) {
        return 0.0;
    }
    if x >= nf / 3.0 {
        return 1.0;
    }
    (cvm_limit_cdf(x) * (1.0 + 1.0 / (12.0 * nf)) + cvm_correction(x) / nf).clamp(0.0, 1.0)
}

pub fn cvm_pvalue(w2: f64, n: usize) -> f64 {
    1.0 - cvm_cdf(w2, n)
}

/// Marsaglia and Marsaglia's approximation to the limiting cdf of `A²`.
pub fn ad_limit_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z < 2.0 {
        (-1.2337141 / z).exp() / z.sqrt()
            * (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z)
    } else {
        (-(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z).exp()).exp()
    }
}

pub fn ad_pvalue(a2: f64) -> f64 {
    (1.0 - ad_limit_cdf(a2)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uniform_plugin(n: usize) -> Vec<f64> {
        (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect()
    }

    #[test]
    fn plugin_sample_extremes() {
        let s = uniform_plugin(100);
        let id = |x: f64| x;
        assert!((ks_statistic(id, &s) - 0.005).abs() < 1e-15);
        assert!((cvm_statistic(id, &s) - 1.0 / 1200.0).abs() < 1e-15);
        assert!(ad_statistic(id, &s) > 0.0);
    }

    #[test]
    fn kolmogorov_tail_values() {
        assert_eq!(ks_pvalue(0.0, 50), 1.0);
        // scipy.special.kolmogorov
        for (x, p) in [(0.5, 0.9639452436648751), (1.0, 0.26999967167735456), (1.36, 0.049485876755377876), (2.0, 0.0006709252557796953)] {
            assert!((kolmogorov_survival(x) - p).abs() < 1e-5, "{x}");
        }
        // both branches agree at the switch
        assert!((kolmogorov_survival(1.0 - 1e-12) - kolmogorov_survival(1.0)).abs() < 1e-10);
    }

    #[test]
    fn cvm_limit_against_reference() {
        // 5% and 1% critical values of the limiting distribution
        assert!((cvm_limit_cdf(0.46136) - 0.95).abs() < 1e-4);
        assert!((cvm_limit_cdf(0.74346) - 0.99).abs() < 1e-4);
        assert!(cvm_limit_cdf(0.01) < 1e-3);
    }

    #[test]
    fn ad_limit_against_reference() {
        // classical critical values 2.492 (5%) and 3.857 (1%)
        assert!((ad_limit_cdf(2.492) - 0.95).abs() < 5e-4);
        assert!((ad_limit_cdf(3.857) - 0.99).abs() < 5e-4);
    }

    #[test]
    fn finite_n_cvm_is_close_to_limit_for_large_n() {
        for x in [0.05, 0.2, 0.5] {
            assert!((cvm_cdf(x, 100_000) - cvm_limit_cdf(x)).abs() < 1e-4);
        }
        // scipy.stats._hypotests._cdf_cvm
        assert!((cvm_cdf(0.028168296290437617, 128) - 0.01784932165357391).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn statistics_ignore_order(mut xs in proptest::collection::vec(0.001f64..0.999, 5..40), seed in 0u64..1000) {
            let id = |x: f64| x;
            let (k, c, a) = (ks_statistic(id, &xs), cvm_statistic(id, &xs), ad_statistic(id, &xs));
            let len = xs.len();
            xs.rotate_left(seed as usize % len);
            xs.reverse();
            prop_assert_eq!(k, ks_statistic(id, &xs));
            prop_assert!((c - cvm_statistic(id, &xs)).abs() < 1e-12);
            prop_assert!((a - ad_statistic(id, &xs)).abs() < 1e-9);
            prop_assert!(k >= 0.5 / len as f64 - 1e-15 && k <= 1.0);
            prop_assert!(c >= 0.0 && a >= 0.0);
        }

        #[test]
        fn pvalues_decrease_in_statistic(a in 0.01f64..3.0, b in 0.01f64..3.0, n in 5usize..500) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(ks_pvalue(lo / 5.0, n) >= ks_pvalue(hi / 5.0, n));
            prop_assert!(cvm_pvalue(lo / 3.0, n) >= cvm_pvalue(hi / 3.0, n) - 1e-9);
            prop_assert!(ad_pvalue(lo * 2.0) >= ad_pvalue(hi * 2.0));
        }
    }
}
