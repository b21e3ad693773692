//! Special functions. Gamma-family and normal-distribution routines are
//! delegated to `statrs`; the wrappers add domain checks and the
//! unregularized forms used by the reliability series.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma as sgamma;

use crate::numerics::quadrature::integrate;
use crate::{Error, Result};

/// `ln Γ(a)` for `a > 0`.
pub fn log_gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires a > 0, got {a}")));
    }
    Ok(sgamma::ln_gamma(a))
}

/// Upper incomplete gamma function `Γ(a, x) = ∫ₓ^∞ t^{a-1} e^{-t} dt`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("upper_incomplete_gamma requires a > 0, got {a}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("upper_incomplete_gamma requires x >= 0, got {x}")));
    }
    let ln_g = sgamma::ln_gamma(a);
    if x == 0.0 {
        return Ok(ln_g.exp());
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let q = sgamma::checked_gamma_ur(a, x).map_err(|e| Error::Domain(e.to_string()))?;
    if q == 0.0 {
        return Ok(0.0);
    }
    Ok((ln_g + q.ln()).exp())
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn lower_regularized_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        sgamma::gamma_lr(a, x)
    }
}

pub fn digamma(x: f64) -> f64 {
    sgamma::digamma(x)
}

/// `(-1)^j · C(δ, j)` for real `δ`, accumulated as a product in log/sign form.
///
/// Exactly zero when `δ` is a non-negative integer smaller than `j`.
pub fn alt_binomial(delta: f64, j: usize) -> f64 {
    let mut log_abs = 0.0;
    let mut negative = false;
    for i in 1..=j {
        let factor = (i as f64 - 1.0 - delta) / i as f64;
        if factor == 0.0 {
            return 0.0;
        }
        if factor < 0.0 {
            negative = !negative;
        }
        log_abs += factor.abs().ln();
    }
    let v = log_abs.exp();
    if negative {
        -v
    } else {
        v
    }
}

/// Error of Stirling's approximation, `ln n! − (n + ½) ln n + n − ½ ln 2π`.
fn stirling_error(n: usize) -> f64 {
    const S: [f64; 5] = [1.0 / 12.0, 1.0 / 360.0, 1.0 / 1260.0, 1.0 / 1680.0, 1.0 / 1188.0];
    const RECURSE_BELOW: usize = 16;
    if n >= RECURSE_BELOW {
        let x = n as f64;
        let nn = x * x;
        return (S[0] - (S[1] - (S[2] - (S[3] - S[4] / nn) / nn) / nn) / nn) / x;
    }
    // step down from the first index where the asymptotic series is accurate
    let mut e = stirling_error(RECURSE_BELOW);
    for k in (n..RECURSE_BELOW).rev() {
        let x = k as f64;
        e += (x + 0.5) * (1.0 / x).ln_1p() - 1.0;
    }
    e
}

/// Deviance term `x ln(x/m) + m − x`, evaluated without cancellation near `x = m`.
fn poisson_deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let v2 = v * v;
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        for j in 1..1000 {
            ej *= v2;
            let next = s + ej / (2 * j + 1) as f64;
            if next == s {
                break;
            }
            s = next;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// Poisson probability `e^{−m} m^k / k!` for `m ≥ 0`, accurate to a few ulps
/// even when `k` and `m` are large (saddle-point form).
pub fn poisson_pmf(k: usize, m: f64) -> f64 {
    if m == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k == 0 {
        return (-m).exp();
    }
    let x = k as f64;
    (-stirling_error(k) - poisson_deviance(x, m)).exp() / (std::f64::consts::TAU * x).sqrt()
}

/// `ln Γ(x) − ln Γ(x + c)` for `x > 0`, `x + c > 0`, without the cancellation
/// of differencing two large log-gammas.
pub fn ln_gamma_ratio(x: f64, c: f64) -> f64 {
    const ASYMPTOTIC_FROM: f64 = 20.0;
    if x < ASYMPTOTIC_FROM || x + c < ASYMPTOTIC_FROM {
        return sgamma::ln_gamma(x) - sgamma::ln_gamma(x + c);
    }
    let omega = |z: f64| {
        let zz = z * z;
        (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * zz)) / zz) / zz) / zz) / z
    };
    -(x - 0.5) * (c / x).ln_1p() - c * (x + c).ln() + c + omega(x) - omega(x + c)
}

/// `ln C(n, k)` for integers.
pub fn ln_binomial_int(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    sgamma::ln_gamma(n as f64 + 1.0) - sgamma::ln_gamma(k as f64 + 1.0) - sgamma::ln_gamma((n - k) as f64 + 1.0)
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Standard normal quantile `Φ⁻¹(p)`.
pub fn standard_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("normal quantile requires 0 < p < 1, got {p}")));
    }
    Ok(Normal::standard().inverse_cdf(p))
}

/// Exponentially scaled modified Bessel function of the second kind,
/// `e^x · K_ν(x)`, from `K_ν(x) = ∫₀^∞ e^{-x cosh t} cosh(νt) dt`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    let res = integrate(
        |t| {
            // cosh t - 1 = 2 sinh²(t/2), exact near t = 0
            let s = (0.5 * t).sinh();
            (-x * 2.0 * s * s).exp() * (nu * t).cosh()
        },
        0.0,
        f64::INFINITY,
        1e-12,
    );
    Ok(res.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn log_gamma_known_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(rel(log_gamma(0.5).unwrap(), 0.5723649429247001) < 1e-13);
        assert!(rel(log_gamma(5.0).unwrap(), 24f64.ln()) < 1e-13);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_against_recurrence_over_range() {
        // ln Γ(a+1) − ln Γ(a) = ln a
        let mut a = 1e-3;
        while a < 1e6 {
            let lhs = log_gamma(a + 1.0).unwrap() - log_gamma(a).unwrap();
            assert!((lhs - a.ln()).abs() <= 1e-12 * log_gamma(a).unwrap().abs().max(1.0), "a = {a}");
            a *= 3.7;
        }
    }

    #[test]
    fn upper_gamma_closed_forms() {
        assert!((upper_incomplete_gamma(1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(rel(upper_incomplete_gamma(1.0, 2.0).unwrap(), (-2.0f64).exp()) < 1e-12);
        assert!(upper_incomplete_gamma(0.0, 1.0).is_err());
        assert!(upper_incomplete_gamma(1.0, -1.0).is_err());
    }

    #[test]
    fn upper_gamma_matches_quadrature() {
        let q = integrate(|t: f64| t.powf(1.5) * (-t).exp(), 1.3, 61.3, 1e-13);
        assert!(q.converged);
        assert!(rel(upper_incomplete_gamma(2.5, 1.3).unwrap(), q.value) < 1e-10);
    }

    #[test]
    fn upper_gamma_at_zero_is_complete_gamma() {
        for a in [0.5, 1.0, 2.0, 3.7] {
            let g = log_gamma(a).unwrap().exp();
            assert!(rel(upper_incomplete_gamma(a, 0.0).unwrap(), g) < 1e-12);
        }
    }

    #[test]
    fn upper_gamma_recurrence_grid() {
        for ia in 0..=19 {
            let a = 0.5 + 0.5 * ia as f64;
            for ix in 0..=20 {
                let x = ix as f64;
                let lhs = upper_incomplete_gamma(a + 1.0, x).unwrap();
                let rhs = a * upper_incomplete_gamma(a, x).unwrap() + x.powf(a) * (-x).exp();
                assert!(rel(lhs, rhs) < 1e-10, "a={a} x={x} lhs={lhs} rhs={rhs}");
            }
        }
    }

    #[test]
    fn alternating_binomial() {
        // (1 - z)^2 = 1 - 2z + z^2
        assert_eq!(alt_binomial(2.0, 0), 1.0);
        assert!((alt_binomial(2.0, 1) + 2.0).abs() < 1e-15);
        assert!((alt_binomial(2.0, 2) - 1.0).abs() < 1e-15);
        assert_eq!(alt_binomial(2.0, 3), 0.0);
        // (1 - z)^{-1/2}: coefficients C(2j, j)/4^j
        assert!((alt_binomial(-0.5, 3) - 20.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn normal_quantile_roundtrip() {
        let z = standard_normal_quantile(0.975).unwrap();
        assert!((z - 1.959963984540054).abs() < 1e-9);
        for p in [1e-8, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let x = standard_normal_quantile(p).unwrap();
            assert!(rel(standard_normal_cdf(x), p) < 1e-9);
        }
        assert!(standard_normal_quantile(0.0).is_err());
    }

    #[test]
    fn bessel_k_half_order_closed_form() {
        // K_{1/2}(x) = sqrt(pi / (2x)) e^{-x}
        for x in [0.1, 1.0, 7.5, 40.0] {
            let expect = (std::f64::consts::PI / (2.0 * x)).sqrt();
            assert!(rel(bessel_k_scaled(0.5, x).unwrap(), expect) < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn poisson_pmf_matches_direct_form() {
        for &(k, m) in &[(0usize, 0.3f64), (1, 0.3), (5, 2.5), (15, 15.0), (16, 15.0), (40, 37.2), (300, 310.0), (1000, 20.0)] {
            let direct = (k as f64 * m.ln() - m - sgamma::ln_gamma(k as f64 + 1.0)).exp();
            assert!((poisson_pmf(k, m) - direct).abs() <= 1e-11 * direct, "{k} {m}");
        }
        let total: f64 = (0..200).map(|k| poisson_pmf(k, 50.0)).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_ratio_matches_log_gamma_difference() {
        for &(x, c) in &[(0.3f64, 1.5f64), (19.0, 2.5), (25.0, 1.5), (400.5, 0.7), (1e4, 3.0)] {
            let direct = sgamma::ln_gamma(x) - sgamma::ln_gamma(x + c);
            assert!((ln_gamma_ratio(x, c) - direct).abs() < 1e-12 * (1.0 + direct.abs()), "{x} {c}");
        }
        // Γ(x)/Γ(x+1) = 1/x exactly
        assert!((ln_gamma_ratio(1234.5, 1.0) + 1234.5f64.ln()).abs() < 1e-14);
    }
}
