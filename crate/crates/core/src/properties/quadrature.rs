//! Defining-integral forms of the distributional properties.

use crate::distribution::{Lifetime, Params, Pngkme};
use crate::numerics::integrate_breaks;
use crate::{Error, Result};

use super::reliability::ReliabilityPair;

const REL_TOL: f64 = 1e-11;

/// Break points at the median and upper percentile inside `(lo, hi)`.
fn panels(d: &dyn Lifetime, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    for u in [0.5, 0.99] {
        let q = d.quantile(u).unwrap_or(f64::NAN);
        if q > lo && q < hi && q > *pts.last().unwrap() {
            pts.push(q);
        }
    }
    pts.push(hi);
    pts
}

/// `∫_lo^hi h(x) f(x) dx` for any lifetime law.
pub fn expect_between<H: Fn(f64) -> f64>(d: &dyn Lifetime, lo: f64, hi: f64, h: H) -> Result<f64> {
    let pts = panels(d, lo, hi);
    integrate_breaks(
        |x| {
            let f = d.pdf(x);
            if f == 0.0 {
                0.0
            } else {
                h(x) * f
            }
        },
        &pts,
        REL_TOL,
    )
    .into_result()
}

fn dist(p: &Params) -> Result<Pngkme> {
    p.validate()?;
    Ok(Pngkme::new(*p))
}

pub fn raw_moment(p: &Params, r: u32) -> Result<f64> {
    expect_between(&dist(p)?, 0.0, f64::INFINITY, |x| x.powi(r as i32))
}

pub fn mgf(p: &Params, t: f64) -> Result<f64> {
    super::check_mgf_argument(p, t)?;
    expect_between(&dist(p)?, 0.0, f64::INFINITY, |x| (t * x).exp())
}

pub fn cf(p: &Params, t: f64) -> Result<(f64, f64)> {
    let d = dist(p)?;
    Ok((
        expect_between(&d, 0.0, f64::INFINITY, |x| (t * x).cos())?,
        expect_between(&d, 0.0, f64::INFINITY, |x| (t * x).sin())?,
    ))
}

pub fn upper_partial_mean(p: &Params, q: f64) -> Result<f64> {
    expect_between(&dist(p)?, q, f64::INFINITY, |x| x)
}

pub fn mean_residual_life(p: &Params, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("mean residual life needs t >= 0, got {t}")));
    }
    let d = dist(p)?;
    let s_t = d.survival(t);
    if !(s_t > 1e-300) {
        return Err(Error::Domain(format!("mean residual life undefined at t = {t}: survival underflows")));
    }
    let mut pts = vec![t];
    for u in [0.5, 0.99] {
        let q = d.quantile(u)?;
        if q > *pts.last().unwrap() {
            pts.push(q);
        }
    }
    pts.push(f64::INFINITY);
    let tail = integrate_breaks(|x| d.survival(x), &pts, REL_TOL).into_result()?;
    Ok(tail / s_t)
}

pub fn mean_deviation_about_mean(p: &Params) -> Result<f64> {
    let d = dist(p)?;
    let mu = raw_moment(p, 1)?;
    let below = expect_between(&d, 0.0, mu, |x| mu - x)?;
    let above = expect_between(&d, mu, f64::INFINITY, |x| x - mu)?;
    Ok(below + above)
}

pub fn mean_deviation_about_median(p: &Params) -> Result<f64> {
    let d = dist(p)?;
    let m = d.median();
    let below = expect_between(&d, 0.0, m, |x| m - x)?;
    let above = expect_between(&d, m, f64::INFINITY, |x| x - m)?;
    Ok(below + above)
}

pub fn lorenz(p: &Params, u: f64) -> Result<f64> {
    super::check_unit(u)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    let d = dist(p)?;
    let q = d.quantile(u)?;
    Ok(expect_between(&d, 0.0, q, |x| x)? / raw_moment(p, 1)?)
}

pub fn density_power_integral(p: &Params, s: f64) -> Result<f64> {
    super::check_renyi_order(p, s)?;
    let d = dist(p)?;
    integrate_breaks(|x| (s * d.ln_pdf(x)).exp(), &panels(&d, 0.0, f64::INFINITY), REL_TOL).into_result()
}

pub fn renyi_entropy(p: &Params, s: f64) -> Result<f64> {
    Ok(density_power_integral(p, s)?.ln() / (1.0 - s))
}

/// `−∫ f ln f`.
pub fn shannon_entropy(p: &Params) -> Result<f64> {
    let d = dist(p)?;
    expect_between(&d, 0.0, f64::INFINITY, |x| -d.ln_pdf(x))
}

pub fn reliability(pair: &ReliabilityPair) -> Result<f64> {
    let d1 = dist(&pair.strength)?;
    let d2 = dist(&pair.stress)?;
    expect_between(&d1, 0.0, f64::INFINITY, |x| d2.cdf(x))
}
