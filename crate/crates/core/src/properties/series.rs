//! Series forms of the distributional properties.
//!
//! Every density of the family is an infinite mixture of exponential
//! densities with rates `kβ`:
//!
//! ```text
//! f(x) = Σ_{j≥0} Σ_{k≥1} W_{jk} · kβ e^{−kβx},
//! W_{jk} = P_j e^{−a_j} a_j^{k−1} / k!,   P_j = α|L| K^α (−1)^j C(α−1, j),
//! ```
//!
//! with `L = ln λ` and `K = λ/|λ−1|`. For `λ > 1`, `a_j = (j+1)L` and the
//! sum is the textbook expansion of `(1 − λ^{−g})^{α−1}`. For `λ < 1` the
//! binomial is expanded in `λ^{g}` instead, giving `a_j = (j−α)|L|`. At
//! `λ = 1` the mixture collapses to a single index with rates `(j+1)β`.
//! Each property is then a sum of the matching exponential functional.

use crate::distribution::{Lifetime, Params, Pngkme};
use crate::numerics::{alt_binomial, ln_gamma_ratio, log_gamma, lower_regularized_gamma, poisson_pmf, sum_double_series_from, sum_series, SeriesControl};
use crate::{Error, Result};

use super::reliability::{ReliabilityCase, ReliabilityPair};

/// Relative distance from `λ = 1` under which the series cancel too badly.
pub const ILL_CONDITIONED_BAND: f64 = 1e-3;

/// `ln(λ/|λ−1|) = −ln|1 − e^{−L}|`.
fn ln_k(l: f64) -> f64 {
    if l > 0.0 {
        -(-(-l).exp_m1()).ln()
    } else {
        -(l.abs().exp_m1()).ln()
    }
}

/// `(1 − e^{−d}) / d`, equal to 1 at `d = 0`.
fn one_minus_exp_over(d: f64) -> f64 {
    if d == 0.0 {
        1.0
    } else {
        -(-d).exp_m1() / d
    }
}

/// `e^{−a} a^m / m!` with the sign of `a^m` for negative `a`.
fn poisson_weight(a: f64, m: usize) -> f64 {
    let v = poisson_pmf(m, a.abs()) * (-2.0 * a.min(0.0)).exp();
    if a < 0.0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

fn check_conditioning(p: &Params) -> Result<f64> {
    let l = Pngkme::new(*p).log_lambda();
    if l != 0.0 && (p.lambda - 1.0).abs() < ILL_CONDITIONED_BAND {
        return Err(Error::SeriesUnavailable(format!(
            "lambda = {} is too close to one for the expansion to be stable",
            p.lambda
        )));
    }
    Ok(l)
}

/// The exponential-mixture representation of one parameter triple.
#[derive(Debug, Clone, Copy)]
pub struct ExpMixture {
    alpha: f64,
    beta: f64,
    l: f64,
    ctrl: SeriesControl,
}

impl ExpMixture {
    pub fn new(p: &Params) -> Result<Self> {
        Self::with_control(p, SeriesControl::default())
    }

    pub fn with_control(p: &Params, ctrl: SeriesControl) -> Result<Self> {
        p.validate()?;
        ctrl.validate()?;
        let l = check_conditioning(p)?;
        Ok(ExpMixture { alpha: p.alpha, beta: p.beta, l, ctrl })
    }

    fn a(&self, j: usize) -> f64 {
        if self.l > 0.0 {
            (j as f64 + 1.0) * self.l
        } else {
            (j as f64 - self.alpha) * -self.l
        }
    }

    /// `Σ W · h(ρ)` where `ρ` runs over the component rates.
    pub fn sum<H: Fn(f64) -> f64>(&self, h: H) -> Result<f64> {
        let (alpha, beta, l) = (self.alpha, self.beta, self.l);
        if l == 0.0 {
            return sum_series(
                0,
                |j| {
                    let c = alt_binomial(alpha - 1.0, j);
                    if c == 0.0 {
                        0.0
                    } else {
                        alpha * c / (j as f64 + 1.0) * h((j as f64 + 1.0) * beta)
                    }
                },
                &self.ctrl,
            )
            .map(|s| s.value);
        }
        let scale = alpha * l.abs() * (alpha * ln_k(l)).exp();
        sum_double_series_from(
            0,
            1,
            |j, k| {
                let c = alt_binomial(alpha - 1.0, j);
                if c == 0.0 {
                    return 0.0;
                }
                scale * c * poisson_weight(self.a(j), k - 1) / k as f64 * h(k as f64 * beta)
            },
            &self.ctrl,
        )
        .map(|s| s.value)
    }
}

pub fn raw_moment(p: &Params, r: u32) -> Result<f64> {
    if r == 0 {
        return Ok(1.0);
    }
    let fact = (1..=r).map(f64::from).product::<f64>();
    ExpMixture::new(p)?.sum(|rho| fact / rho.powi(r as i32))
}

pub fn mgf(p: &Params, t: f64) -> Result<f64> {
    super::check_mgf_argument(p, t)?;
    ExpMixture::new(p)?.sum(|rho| rho / (rho - t))
}

pub fn cf(p: &Params, t: f64) -> Result<(f64, f64)> {
    let m = ExpMixture::new(p)?;
    let re = m.sum(|rho| rho * rho / (rho * rho + t * t))?;
    let im = m.sum(|rho| rho * t / (rho * rho + t * t))?;
    Ok((re, im))
}

/// `∫_q^∞ x f(x) dx`.
pub fn upper_partial_mean(p: &Params, q: f64) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(Error::Domain(format!("partial mean needs q >= 0, got {q}")));
    }
    ExpMixture::new(p)?.sum(|rho| (rho * q + 1.0) * (-rho * q).exp() / rho)
}

pub fn mean_deviation_about_mean(p: &Params) -> Result<f64> {
    let mu = raw_moment(p, 1)?;
    let f_mu = Pngkme::new(*p).cdf(mu);
    Ok(2.0 * mu * f_mu - 2.0 * mu + 2.0 * upper_partial_mean(p, mu)?)
}

pub fn mean_deviation_about_median(p: &Params) -> Result<f64> {
    let mu = raw_moment(p, 1)?;
    let m = Pngkme::new(*p).median();
    Ok(-mu + 2.0 * upper_partial_mean(p, m)?)
}

pub fn lorenz(p: &Params, u: f64) -> Result<f64> {
    super::check_unit(u)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    let q = Pngkme::new(*p).quantile(u)?;
    Ok(1.0 - upper_partial_mean(p, q)? / raw_moment(p, 1)?)
}

/// `∫₀^∞ f(x)^s dx`.
pub fn density_power_integral(p: &Params, s: f64) -> Result<f64> {
    super::check_renyi_order(p, s)?;
    let l = check_conditioning(p)?;
    let Params { alpha, beta, .. } = *p;
    let delta = s * (alpha - 1.0);
    let ctrl = SeriesControl::default();
    if l == 0.0 {
        let c = (alpha * beta).powf(s);
        return sum_series(0, |j| alt_binomial(delta, j) / (beta * (s + j as f64)), &ctrl).map(|r| c * r.value);
    }
    let ln_c = (alpha * beta * l.abs()).ln() + alpha * ln_k(l);
    let c = (s * ln_c).exp();
    let a = |j: usize| if l > 0.0 { (j as f64 + s) * l } else { (j as f64 - s * alpha) * -l };
    sum_double_series_from(
        0,
        0,
        |j, k| {
            let b = alt_binomial(delta, j);
            if b == 0.0 {
                return 0.0;
            }
            b * poisson_weight(a(j), k) / (beta * (s + k as f64))
        },
        &ctrl,
    )
    .map(|r| c * r.value)
}

pub fn renyi_entropy(p: &Params, s: f64) -> Result<f64> {
    Ok(density_power_integral(p, s)?.ln() / (1.0 - s))
}

/// `γ(a, x) / x^a = ∫₀¹ t^{a−1} e^{−xt} dt`, continued to `x ≤ 0`.
fn lower_gamma_over_power(a: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0 / a);
    }
    if x < 0.0 {
        // Σ_m (−x)^m / (m! (a + m)), all terms positive
        let mut power = 1.0;
        return sum_series(
            0,
            |m| {
                if m > 0 {
                    power *= -x / m as f64;
                }
                power / (a + m as f64)
            },
            &SeriesControl::default(),
        )
        .map(|s| s.value);
    }
    let p = lower_regularized_gamma(a, x);
    Ok((log_gamma(a)? + p.ln() - a * x.ln()).exp())
}

/// Reflected expansion of `r(z)^a = K^a e^{aσz} Σ_i (−1)^i C(a, i) e^{−i|L|z}`.
fn sigma(l: f64) -> f64 {
    if l < 0.0 {
        -l
    } else {
        0.0
    }
}

/// `Σ_i (−1)^i C(a, i) (1 − e^{−D_i}) / D_i` with `D_i = shift + i·b`.
///
/// For `shift > 0` the `1/D_i` part is summed in closed form,
/// `Σ_i (−1)^i C(a, i) / (x + i) = Γ(x) Γ(a + 1) / Γ(x + a + 1)` with
/// `x = shift / b`, leaving only a geometrically damped remainder.
fn binomial_exp_sum(a: f64, shift: f64, b: f64, ctrl: &SeriesControl) -> Result<f64> {
    if shift > 0.0 {
        let x = shift / b;
        let head = (ln_gamma_ratio(x, a + 1.0) + log_gamma(a + 1.0)?).exp() / b;
        let damped = sum_series(
            0,
            |i| {
                let d = shift + i as f64 * b;
                alt_binomial(a, i) * (-d).exp() / d
            },
            ctrl,
        )?;
        Ok(head - damped.value)
    } else {
        sum_series(0, |i| alt_binomial(a, i) * one_minus_exp_over(shift + i as f64 * b), ctrl).map(|s| s.value)
    }
}

pub fn reliability(pair: &ReliabilityPair) -> Result<f64> {
    let case = pair.case();
    let (p1, p2) = (pair.strength, pair.stress);
    if case != ReliabilityCase::BothExponentiated && (p1.alpha != p2.alpha || p1.beta != p2.beta) {
        return Err(Error::SeriesUnavailable("the closed forms need a shared alpha and beta".into()));
    }
    let ctrl = SeriesControl::default();
    let alpha = p1.alpha;
    match case {
        ReliabilityCase::BothTransformed => {
            let l1 = check_conditioning(&p1)?;
            let l2 = check_conditioning(&p2)?;
            let scale = alpha * l1.abs() * (alpha * (ln_k(l1) + ln_k(l2))).exp();
            let shift = l1 - (alpha - 1.0) * sigma(l1) - alpha * sigma(l2);
            let b = l2.abs();
            let mut inner_err = None;
            let outer = sum_series(
                0,
                |j| {
                    let c = alt_binomial(alpha - 1.0, j);
                    if c == 0.0 {
                        return 0.0;
                    }
                    match binomial_exp_sum(alpha, shift + j as f64 * l1.abs(), b, &ctrl) {
                        Ok(v) => c * v,
                        Err(e) => {
                            inner_err = Some(e);
                            f64::NAN
                        }
                    }
                },
                &ctrl,
            );
            if let Some(e) = inner_err {
                return Err(e);
            }
            outer.map(|s| scale * s.value)
        }
        ReliabilityCase::StrengthExponentiated => {
            let l2 = check_conditioning(&p2)?;
            let k2 = (alpha * ln_k(l2)).exp();
            let mut err = None;
            let s = sum_series(
                0,
                |i| {
                    let d = alt_binomial(alpha, i);
                    if d == 0.0 {
                        return 0.0;
                    }
                    match lower_gamma_over_power(alpha, i as f64 * l2.abs() - alpha * sigma(l2)) {
                        Ok(v) => d * alpha * v,
                        Err(e) => {
                            err = Some(e);
                            f64::NAN
                        }
                    }
                },
                &ctrl,
            );
            if let Some(e) = err {
                return Err(e);
            }
            s.map(|s| k2 * s.value)
        }
        ReliabilityCase::StressExponentiated => {
            let l1 = check_conditioning(&p1)?;
            let k1 = (alpha * ln_k(l1)).exp();
            let shift = l1 - (alpha - 1.0) * sigma(l1);
            let mut err = None;
            let s = sum_series(
                0,
                |j| {
                    let c = alt_binomial(alpha - 1.0, j);
                    if c == 0.0 {
                        return 0.0;
                    }
                    let x = shift + j as f64 * l1.abs();
                    match lower_gamma_over_power(alpha + 1.0, x) {
                        Ok(v) => c * v,
                        Err(e) => {
                            err = Some(e);
                            f64::NAN
                        }
                    }
                },
                &ctrl,
            );
            if let Some(e) = err {
                return Err(e);
            }
            s.map(|s| alpha * l1.abs() * k1 * s.value)
        }
        ReliabilityCase::BothExponentiated => {
            let (a1, b1, a2, b2) = (p1.alpha, p1.beta, p2.alpha, p2.beta);
            sum_double_series_from(
                0,
                0,
                |j, k| {
                    let c = alt_binomial(a1 - 1.0, j);
                    let d = alt_binomial(a2, k);
                    if c == 0.0 || d == 0.0 {
                        return 0.0;
                    }
                    c * d * a1 * b1 / ((j as f64 + 1.0) * b1 + k as f64 * b2)
                },
                &ctrl,
            )
            .map(|s| s.value)
        }
    }
}
