//! Log-likelihood and its first two derivatives for every model family.

use crate::distribution::{Family, Lifetime, ModelSpec, Params, Pngkme};
use crate::numerics::{digamma, invert_symmetric, Matrix};
use crate::{Error, Result};

use super::Sample;

/// `Σ ln f(xᵢ)` for the completed parameters of `spec`.
///
/// Returns `-inf` when some observation has zero density under the model.
pub fn log_likelihood(spec: &ModelSpec, params: &Params, sample: &Sample) -> Result<f64> {
    let model = spec.model(*params)?;
    let mut total = 0.0;
    for &x in sample.values() {
        let v = model.ln_pdf(x);
        if v == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        total += v;
    }
    Ok(total)
}

/// The PNGKME log-likelihood written out in closed form,
///
/// `n ln α + n ln β + nα ln λ + n ln|ln λ| − nα ln|λ−1| − βΣxᵢ
///  − (n − Σe^{−βxᵢ}) ln λ + (α−1) Σ ln|1 − λ^{−(1−e^{−βxᵢ})}|`,
///
/// valid for `λ ≠ 1`.
pub fn log_likelihood_closed_form(params: &Params, sample: &Sample) -> Result<f64> {
    params.validate()?;
    let Params { alpha, beta, lambda } = *params;
    if lambda == 1.0 {
        return Err(Error::Domain("the closed form needs lambda != 1".into()));
    }
    let n = sample.len() as f64;
    let l = lambda.ln();
    let mut sum_x = 0.0;
    let mut sum_e = 0.0;
    let mut sum_log = 0.0;
    for &x in sample.values() {
        let e = (-beta * x).exp();
        sum_x += x;
        sum_e += e;
        let g = -(-beta * x).exp_m1();
        sum_log += (-(-g * l).exp_m1()).abs().ln();
    }
    Ok(n * alpha.ln() + n * beta.ln() + n * alpha * l + n * l.abs().ln() - alpha * n * (lambda - 1.0).abs().ln() - beta * sum_x
        - (n - sum_e) * l
        + (alpha - 1.0) * sum_log)
}

/// `t / (e^t − 1)`, equal to one at the origin.
fn b(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - 0.5 * t
    } else {
        t / t.exp_m1()
    }
}

/// `e^t / (e^t − 1)² = 1 / (4 sinh²(t/2))`.
fn q(t: f64) -> f64 {
    let s = (0.5 * t).sinh();
    0.25 / (s * s)
}

/// Below this `|ln λ|` the derivative pieces are taken from their Taylor series.
const SMALL_L: f64 = 1e-2;

/// Gradient and Hessian of `ln f(x)` in the coordinates `(α, β, L = ln λ)`.
fn pngkme_terms(dist: &Pngkme, x: f64, grad: &mut [f64; 3], hess: &mut [[f64; 3]; 3]) {
    let Params { alpha, beta, .. } = dist.params();
    let l = dist.log_lambda();
    let e = (-beta * x).exp();
    let g = -(-beta * x).exp_m1();
    let xe = x * e;
    let t = g * l;
    let psi = dist.ln_r_q(x).0;
    let bt = b(t);
    let psi_g = bt / g;
    let psi_gg = -bt * (bt + t) / (g * g);
    let small = l.abs() < SMALL_L;
    let (psi_l, psi_ll, phi1, phi2) = if small {
        let (l2, g2) = (l * l, g * g);
        (
            (1.0 - g) / 2.0 + (g2 - 1.0) * l / 12.0 + (1.0 - g2 * g2) * l2 * l / 720.0,
            (g2 - 1.0) / 12.0 + (1.0 - g2 * g2) * l2 / 240.0 - (1.0 - g2 * g2 * g2) * l2 * l2 / 6048.0,
            0.5 - l / 12.0 + l2 * l / 720.0,
            -1.0 / 12.0 + l2 / 240.0 - l2 * l2 / 6048.0,
        )
    } else {
        (
            (bt - b(l)) / l,
            q(l) - g * g * q(t),
            (1.0 - b(l)) / l,
            -1.0 / (l * l) + q(l),
        )
    };
    let psi_gl = if t.abs() < SMALL_L {
        -0.5 + t / 6.0 - t * t * t / 180.0
    } else {
        1.0 / t.exp_m1() - t * q(t)
    };
    let am1 = alpha - 1.0;

    grad[0] += 1.0 / alpha + psi;
    grad[1] += 1.0 / beta - x - l * xe + am1 * psi_g * xe;
    grad[2] += phi1 - g + am1 * psi_l;

    hess[0][0] += -1.0 / (alpha * alpha);
    hess[0][1] += psi_g * xe;
    hess[0][2] += psi_l;
    hess[1][1] += -1.0 / (beta * beta) + l * x * xe + am1 * (psi_gg * xe * xe - psi_g * x * xe);
    hess[1][2] += -xe + am1 * psi_gl * xe;
    hess[2][2] += phi2 + am1 * psi_ll;
}

/// Log-likelihood and its gradient in `(α, β, L)` in a single pass.
///
/// Cheaper than [`log_likelihood`] followed by [`score`]; used inside the
/// optimizer, where `|L|` stays bounded by the search box.
pub(crate) fn pngkme_value_gradient(params: &Params, sample: &Sample) -> Result<(f64, [f64; 3])> {
    params.validate()?;
    let dist = Pngkme::new(*params);
    let Params { alpha, beta, .. } = *params;
    let l = dist.log_lambda();
    let am1 = alpha - 1.0;
    let em1_l = (-l).exp_m1();
    let b_l = b(l);
    let small = l.abs() < SMALL_L;
    let (mut value, mut sum_psi, mut gb, mut gl) = (0.0, 0.0, 0.0, 0.0);
    for &x in sample.values() {
        let bx = beta * x;
        let g = -(-bx).exp_m1();
        let xe = x * (1.0 - g);
        let t = g * l;
        let (psi, bt) = if l == 0.0 {
            (g.ln(), 1.0)
        } else {
            let em1_t = (-t).exp_m1();
            let bt = if t.abs() < 1e-8 { 1.0 - 0.5 * t } else { -t * (1.0 + em1_t) / em1_t };
            ((em1_t / em1_l).ln(), bt)
        };
        let psi_l = if small {
            let g2 = g * g;
            (1.0 - g) / 2.0 + (g2 - 1.0) * l / 12.0 + (1.0 - g2 * g2) * l * l * l / 720.0
        } else {
            (bt - b_l) / l
        };
        value += -bx - t + am1 * psi;
        sum_psi += psi;
        gb += -x - l * xe + am1 * bt / g * xe;
        gl += -g + am1 * psi_l;
    }
    let n = sample.len() as f64;
    let phi1 = if small { 0.5 - l / 12.0 + l * l * l / 720.0 } else { (1.0 - b_l) / l };
    value += n * (alpha.ln() + beta.ln() + Pngkme::phi(l));
    Ok((value, [n / alpha + sum_psi, n / beta + gb, n * phi1 + gl]))
}

/// Sums of the per-observation gradient and Hessian in `(α, β, L)`.
fn pngkme_log_coordinate_derivatives(params: &Params, sample: &Sample) -> Result<([f64; 3], [[f64; 3]; 3])> {
    params.validate()?;
    let dist = Pngkme::new(*params);
    let mut grad = [0.0; 3];
    let mut hess = [[0.0; 3]; 3];
    for &x in sample.values() {
        pngkme_terms(&dist, x, &mut grad, &mut hess);
    }
    hess[1][0] = hess[0][1];
    hess[2][0] = hess[0][2];
    hess[2][1] = hess[1][2];
    Ok((grad, hess))
}

/// Analytic PNGKME score `(∂/∂α, ∂/∂β, ∂/∂λ) ln L`.
///
/// The derivatives are formed in `ln λ`, where the density has no branch at
/// `λ = 1`, and mapped back, so the score is continuous through `λ = 1`.
pub fn score(params: &Params, sample: &Sample) -> Result<[f64; 3]> {
    let (g, _) = pngkme_log_coordinate_derivatives(params, sample)?;
    Ok([g[0], g[1], g[2] / params.lambda])
}

/// Negated Hessian of the log-likelihood, ordered `(α, β, λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedInfo {
    pub matrix: [[f64; 3]; 3],
}

impl ObservedInfo {
    /// Inverse of the information, i.e. the asymptotic covariance of the MLE.
    pub fn inverse(&self) -> Result<[[f64; 3]; 3]> {
        crate::numerics::invert_3x3_symmetric(&self.matrix)
    }
}

/// Observed information of the PNGKME log-likelihood at `params`.
pub fn observed_information(params: &Params, sample: &Sample) -> Result<ObservedInfo> {
    let h = natural_hessian(&ModelSpec::new(Family::Pngkme), params, sample)?;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = -h[i][j];
        }
    }
    Ok(ObservedInfo { matrix: m })
}

fn to_natural(params: &Params, g: [f64; 3], h: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let lam = params.lambda;
    let grad = [g[0], g[1], g[2] / lam];
    let mut hess = h;
    for i in 0..2 {
        hess[i][2] /= lam;
        hess[2][i] /= lam;
    }
    hess[2][2] = (h[2][2] - g[2]) / (lam * lam);
    (grad, hess)
}

/// Gradient of the log-likelihood in the natural parameters `(α, β, λ)`,
/// for any family. Components that a family does not use are zero.
pub fn natural_gradient(spec: &ModelSpec, params: &Params, sample: &Sample) -> Result<[f64; 3]> {
    let p = spec.complete(*params);
    p.validate()?;
    match spec.family {
        Family::ExponentiatedWeibull => Ok(ew_gradient(&p, sample)),
        Family::Weibull => Ok(weibull_gradient(&p, sample)),
        Family::Gamma => Ok(gamma_gradient(&p, sample)),
        _ => score(&p, sample),
    }
}

/// Hessian of the log-likelihood in `(α, β, λ)`.
///
/// Analytic for the PNGKME family; for the competitor laws it is the central
/// difference of the analytic gradient.
pub fn natural_hessian(spec: &ModelSpec, params: &Params, sample: &Sample) -> Result<[[f64; 3]; 3]> {
    let p = spec.complete(*params);
    p.validate()?;
    if spec.family.is_pngkme_member() {
        let (g, h) = pngkme_log_coordinate_derivatives(&p, sample)?;
        return Ok(to_natural(&p, g, h).1);
    }
    const STEP: f64 = 1e-5;
    let base = p.as_array();
    let mask = spec.free_mask();
    let mut h = [[0.0; 3]; 3];
    for j in 0..3 {
        if !mask[j] {
            continue;
        }
        let step = STEP * base[j];
        let mut up = base;
        let mut down = base;
        up[j] += step;
        down[j] -= step;
        let gu = natural_gradient(spec, &Params::from_array(up)?, sample)?;
        let gd = natural_gradient(spec, &Params::from_array(down)?, sample)?;
        for i in 0..3 {
            h[i][j] = (gu[i] - gd[i]) / (2.0 * step);
        }
    }
    for i in 0..3 {
        for j in 0..i {
            let avg = 0.5 * (h[i][j] + h[j][i]);
            h[i][j] = avg;
            h[j][i] = avg;
        }
    }
    Ok(h)
}

/// Inverse of the observed information restricted to the free parameters.
pub(crate) fn free_covariance(spec: &ModelSpec, params: &Params, sample: &Sample) -> Result<Matrix> {
    let h = natural_hessian(spec, params, sample)?;
    let idx: Vec<usize> = (0..3).filter(|&i| spec.free_mask()[i]).collect();
    let info: Matrix = idx.iter().map(|&i| idx.iter().map(|&j| -h[i][j]).collect()).collect();
    invert_symmetric(&info)
}

fn ew_gradient(p: &Params, sample: &Sample) -> [f64; 3] {
    let Params { alpha, beta, lambda } = *p;
    let mut g = [0.0; 3];
    for &x in sample.values() {
        let lx = x.ln();
        let xl = x.powf(lambda);
        let t = beta * xl;
        let w = 1.0 / t.exp_m1();
        g[0] += 1.0 / alpha + (-(-t).exp_m1()).ln();
        g[1] += 1.0 / beta - xl + (alpha - 1.0) * xl * w;
        g[2] += 1.0 / lambda + lx - t * lx + (alpha - 1.0) * t * lx * w;
    }
    g
}

fn weibull_gradient(p: &Params, sample: &Sample) -> [f64; 3] {
    let (a, r) = (p.alpha, p.beta);
    let mut g = [0.0; 3];
    for &x in sample.values() {
        let lz = (r * x).ln();
        let y = (a * lz).exp();
        g[0] += 1.0 / a + lz - y * lz;
        g[1] += a / r - a * y / r;
    }
    g
}

fn gamma_gradient(p: &Params, sample: &Sample) -> [f64; 3] {
    let (a, r) = (p.alpha, p.beta);
    let n = sample.len() as f64;
    let sum_lx: f64 = sample.values().iter().map(|x| x.ln()).sum();
    let sum_x: f64 = sample.values().iter().sum();
    [n * (r.ln() - digamma(a)) + sum_lx, n * a / r - sum_x, 0.0]
}
