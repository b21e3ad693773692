//! Order statistics of an i.i.d. PNGKME sample.

use crate::distribution::{Lifetime, Params, Pngkme};
use crate::numerics::ln_binomial_int;
use crate::{Error, Result};

fn check_rank(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("rank k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> f64 {
    ln_binomial_int(n as u64, k as u64).exp().round()
}

/// `P(X_{k:n} ≤ x) = Σ_{i=k}^{n} C(n,i) F^i (1−F)^{n−i}`.
pub fn order_stat_cdf(p: &Params, n: usize, k: usize, x: f64) -> Result<f64> {
    check_rank(n, k)?;
    let d = Pngkme::new(*p);
    if x <= 0.0 {
        return Ok(0.0);
    }
    let (ln_f, ln_s) = (d.ln_cdf(x), d.ln_survival(x));
    let total: f64 = (k..=n)
        .map(|i| (ln_binomial_int(n as u64, i as u64) + i as f64 * ln_f + (n - i) as f64 * ln_s).exp())
        .sum();
    Ok(total.min(1.0))
}

/// Density of the `k`-th smallest of `n` observations.
pub fn order_stat_pdf(p: &Params, n: usize, k: usize, x: f64) -> Result<f64> {
    check_rank(n, k)?;
    let d = Pngkme::new(*p);
    let ln_pdf = d.ln_pdf(x);
    if ln_pdf == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let ln_c = (n as f64).ln() + ln_binomial_int(n as u64 - 1, k as u64 - 1);
    let mut v = ln_c + ln_pdf;
    if k > 1 {
        v += (k - 1) as f64 * d.ln_cdf(x);
    }
    if n > k {
        v += (n - k) as f64 * d.ln_survival(x);
    }
    Ok(v.exp())
}

fn with_alpha(p: &Params, m: usize) -> Pngkme {
    Pngkme::new(Params { alpha: p.alpha * m as f64, ..*p })
}

/// The alternating expansion in powers of the CDF; each `F^m` is the CDF
/// of the family with shape `mα`. Exact in exact arithmetic, it loses
/// accuracy to cancellation once `n` is large.
pub fn order_stat_cdf_expansion(p: &Params, n: usize, k: usize, x: f64) -> Result<f64> {
    check_rank(n, k)?;
    let mut total = 0.0;
    for j in k..=n {
        for l in 0..=n - j {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom(n, j) * binom(n - j, l) * with_alpha(p, j + l).cdf(x);
        }
    }
    Ok(total)
}

/// Density counterpart of [`order_stat_cdf_expansion`], using
/// `f F^{m−1} = f_{mα} / m`.
pub fn order_stat_pdf_expansion(p: &Params, n: usize, k: usize, x: f64) -> Result<f64> {
    check_rank(n, k)?;
    let c = (n as f64) * binom(n - 1, k - 1);
    let mut total = 0.0;
    for l in 0..=n - k {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let m = k + l;
        total += sign * binom(n - k, l) * with_alpha(p, m).pdf(x) / m as f64;
    }
    Ok(c * total)
}
