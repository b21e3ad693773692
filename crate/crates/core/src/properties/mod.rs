//! Distributional properties of the PNGKME law.
//!
//! Each property has a series form ([`series`]) built on the
//! exponential-mixture expansion of the density, and a defining-integral
//! form ([`quadrature`]). The dispatching functions in this module take a
//! [`Method`]; a series that cannot be used or does not settle falls back to
//! the integral with a logged warning.

mod order;
pub mod quadrature;
mod reliability;
pub mod series;

use serde::{Deserialize, Serialize};

use crate::distribution::Params;
use crate::{Error, Result};

pub use order::{order_stat_cdf, order_stat_cdf_expansion, order_stat_pdf, order_stat_pdf_expansion};
pub use reliability::{ReliabilityCase, ReliabilityPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    #[default]
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRequest {
    pub params: Params,
    pub r: u32,
    pub method: Method,
}

fn dispatch<T>(method: Method, what: &str, s: impl FnOnce() -> Result<T>, q: impl FnOnce() -> Result<T>) -> Result<T> {
    match method {
        Method::Quadrature => q(),
        Method::Series => match s() {
            Err(e @ (Error::SeriesNonConvergence { .. } | Error::SeriesUnavailable(_))) => {
                log::warn!("{what}: series form failed ({e}); using quadrature");
                q()
            }
            other => other,
        },
    }
}

pub(crate) fn check_mgf_argument(p: &Params, t: f64) -> Result<()> {
    if !(t < p.beta) {
        return Err(Error::Domain(format!("mgf requires t < beta = {}, got {t}", p.beta)));
    }
    Ok(())
}

pub(crate) fn check_unit(u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("probability must lie in [0, 1], got {u}")));
    }
    Ok(())
}

/// `∫ f^s` is finite iff `s > 0` and `s(α − 1) > −1`.
pub(crate) fn check_renyi_order(p: &Params, s: f64) -> Result<()> {
    if !(s > 0.0) || (s - 1.0).abs() <= 1e-8 {
        return Err(Error::Domain(format!("Renyi order must be positive and differ from 1, got {s}")));
    }
    if s * (p.alpha - 1.0) <= -1.0 {
        return Err(Error::Domain(format!("integral of f^{s} diverges at the origin for alpha = {}", p.alpha)));
    }
    Ok(())
}

/// `E[X^r]`.
pub fn raw_moment(req: &MomentRequest) -> Result<f64> {
    if req.r == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    let (p, r) = (&req.params, req.r);
    dispatch(req.method, "raw moment", || series::raw_moment(p, r), || quadrature::raw_moment(p, r))
}

pub fn mean(p: &Params) -> Result<f64> {
    raw_moment(&MomentRequest { params: *p, r: 1, method: Method::Quadrature })
}

pub fn variance(p: &Params) -> Result<f64> {
    let m1 = mean(p)?;
    let m2 = raw_moment(&MomentRequest { params: *p, r: 2, method: Method::Quadrature })?;
    Ok(m2 - m1 * m1)
}

/// Moment generating function, defined for `t < β`.
pub fn mgf(p: &Params, t: f64, method: Method) -> Result<f64> {
    dispatch(method, "mgf", || series::mgf(p, t), || quadrature::mgf(p, t))
}

/// Characteristic function as `(re, im)`.
pub fn cf(p: &Params, t: f64, method: Method) -> Result<(f64, f64)> {
    dispatch(method, "characteristic function", || series::cf(p, t), || quadrature::cf(p, t))
}

/// Principal logarithm of the characteristic function, as `(re, im)`.
pub fn cgf(p: &Params, t: f64, method: Method) -> Result<(f64, f64)> {
    let (re, im) = cf(p, t, method)?;
    Ok((re.hypot(im).ln(), im.atan2(re)))
}

/// `E[X − t | X > t]`.
pub fn mean_residual_life(p: &Params, t: f64) -> Result<f64> {
    quadrature::mean_residual_life(p, t)
}

/// `E|X − μ|`.
pub fn mean_deviation_about_mean(p: &Params, method: Method) -> Result<f64> {
    dispatch(
        method,
        "mean deviation about the mean",
        || series::mean_deviation_about_mean(p),
        || quadrature::mean_deviation_about_mean(p),
    )
}

/// `E|X − M|` with `M` the median.
pub fn mean_deviation_about_median(p: &Params, method: Method) -> Result<f64> {
    dispatch(
        method,
        "mean deviation about the median",
        || series::mean_deviation_about_median(p),
        || quadrature::mean_deviation_about_median(p),
    )
}

/// `L(u) = (1/μ) ∫₀^{Q(u)} x f(x) dx`.
pub fn lorenz(p: &Params, u: f64, method: Method) -> Result<f64> {
    dispatch(method, "Lorenz curve", || series::lorenz(p, u), || quadrature::lorenz(p, u))
}

/// `B(u) = L(u) / u`.
pub fn bonferroni(p: &Params, u: f64, method: Method) -> Result<f64> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("Bonferroni curve needs 0 < u <= 1, got {u}")));
    }
    Ok(lorenz(p, u, method)? / u)
}

/// `(1/(1−s)) ln ∫ f^s`.
pub fn renyi_entropy(p: &Params, s: f64, method: Method) -> Result<f64> {
    dispatch(method, "Renyi entropy", || series::renyi_entropy(p, s), || quadrature::renyi_entropy(p, s))
}

pub fn shannon_entropy(p: &Params) -> Result<f64> {
    quadrature::shannon_entropy(p)
}

/// Stress-strength reliability `P(X₂ < X₁)`.
pub fn reliability(pair: &ReliabilityPair, method: Method) -> Result<f64> {
    dispatch(method, "reliability", || series::reliability(pair), || quadrature::reliability(pair))
}
