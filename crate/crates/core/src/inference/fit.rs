//! Multi-start maximum likelihood and log-based confidence intervals.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{Family, ModelSpec, Params, RngStream};
use crate::numerics::{standard_normal_quantile, Matrix};
use crate::{Error, Result};

use super::likelihood::{free_covariance, log_likelihood, natural_gradient, natural_hessian, pngkme_value_gradient};
use super::optimize::{maximize, Tolerances};
use super::Sample;

/// Default number of optimizer starts.
pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_SEED: u64 = 20240611;
pub const DEFAULT_OMEGA: f64 = 0.05;
/// Iteration cap per start.
pub const MAX_ITERATIONS: usize = 500;
/// Gradient sup-norm per observation required for convergence.
pub const GRADIENT_TOL_PER_OBS: f64 = 1e-6;
pub const STEP_TOL: f64 = 1e-10;
/// Box on every parameter during the search.
pub const PARAM_BOUNDS: (f64, f64) = (1e-6, 1e6);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Confidence intervals are at level `1 − omega`.
    pub omega: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Additional starting points, e.g. optima of nested models.
    #[serde(default)]
    pub extra_starts: Vec<Params>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { omega: DEFAULT_OMEGA, restarts: DEFAULT_RESTARTS, seed: DEFAULT_SEED, extra_starts: Vec::new() }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 1.0) {
            return Err(Error::Domain(format!("omega must lie in (0, 1), got {}", self.omega)));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("at least one optimizer start is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub parameter: String,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    /// Iterations used by the winning start.
    pub iterations: usize,
    /// Sup-norm of the gradient in log-parameter coordinates at the optimum.
    pub gradient_norm: f64,
    pub restarts_used: usize,
    pub best_start: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub spec: ModelSpec,
    /// All three parameters, with fixed components echoed.
    pub estimates: Params,
    pub free_parameters: Vec<String>,
    pub loglik: f64,
    pub neg2loglik: f64,
    pub aic: f64,
    /// Covariance of the free parameters, `None` when the observed
    /// information is not positive definite.
    pub vcov: Option<Matrix>,
    pub ci: Option<Vec<Interval>>,
    pub omega: f64,
    pub converged: bool,
    pub trace: OptimizerTrace,
}

impl FitResult {
    pub fn free_count(&self) -> usize {
        self.free_parameters.len()
    }
}

/// Log-based intervals `(θ̂/K, θ̂·K)` with `K = exp(z_{ω/2} √ln(1 + Var(θ̂)/θ̂²))`.
pub fn confidence_intervals(fit: &FitResult, omega: f64) -> Result<Vec<Interval>> {
    let vcov = fit.vcov.as_ref().ok_or(Error::Singular)?;
    intervals_from(&fit.spec, &fit.estimates, vcov, omega)
}

fn intervals_from(spec: &ModelSpec, est: &Params, vcov: &Matrix, omega: f64) -> Result<Vec<Interval>> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::Domain(format!("omega must lie in (0, 1), got {omega}")));
    }
    let z = standard_normal_quantile(1.0 - omega / 2.0)?;
    let values = est.as_array();
    let names = ["alpha", "beta", "lambda"];
    let free: Vec<usize> = (0..3).filter(|&i| spec.free_mask()[i]).collect();
    free.iter()
        .enumerate()
        .map(|(k, &i)| {
            let theta = values[i];
            let var = vcov[k][k];
            if !(var >= 0.0) {
                return Err(Error::Singular);
            }
            let factor = (z * (var / (theta * theta)).ln_1p().sqrt()).exp();
            Ok(Interval { parameter: names[i].to_string(), estimate: theta, lower: theta / factor, upper: theta * factor })
        })
        .collect()
}

fn heuristic_starts(spec: &ModelSpec, sample: &Sample) -> Vec<Params> {
    let beta0 = 1.0 / sample.mean();
    match spec.family {
        Family::ExponentiatedWeibull => [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&l| Params { alpha: 1.0, beta: sample.mean().powf(-l), lambda: l })
            .collect(),
        Family::Weibull | Family::Gamma => {
            vec![Params { alpha: 1.0, beta: beta0, lambda: 1.0 }, Params { alpha: 2.0, beta: 2.0 * beta0, lambda: 1.0 }]
        }
        _ => [0.5, E, 10.0, 40.0].iter().map(|&l| Params { alpha: 1.0, beta: beta0, lambda: l }).collect(),
    }
}

fn random_start(rng: &mut RngStream, sample: &Sample) -> Params {
    let mut log_uniform = |lo: f64, hi: f64| (lo.ln() + rng.uniform() * (hi / lo).ln()).exp();
    let beta0 = 1.0 / sample.mean();
    Params { alpha: log_uniform(0.2, 10.0), beta: log_uniform(0.1 * beta0, 10.0 * beta0), lambda: log_uniform(0.05, 100.0) }
}

struct Candidate {
    params: Params,
    loglik: f64,
    grad_norm: f64,
    iterations: usize,
}

fn run_start(spec: &ModelSpec, sample: &Sample, start: Params) -> Option<Candidate> {
    let mask = spec.free_mask();
    let free: Vec<usize> = (0..3).filter(|&i| mask[i]).collect();
    let start = spec.complete(start);
    let base = start.as_array();
    let unpack = |u: &[f64]| -> Option<Params> {
        let mut v = base;
        for (k, &i) in free.iter().enumerate() {
            v[i] = u[k].exp();
        }
        Params::from_array(v).ok().map(|p| spec.complete(p))
    };
    let objective = |u: &[f64]| -> Option<(f64, Vec<f64>)> {
        let p = unpack(u)?;
        if spec.family.is_pngkme_member() {
            // gradient already in (α, β, ln λ)
            let (ll, g) = pngkme_value_gradient(&p, sample).ok()?;
            let scale = [p.alpha, p.beta, 1.0];
            return ll.is_finite().then(|| free.iter().map(|&i| g[i] * scale[i]).collect()).map(|g| (ll, g));
        }
        let ll = log_likelihood(spec, &p, sample).ok()?;
        if !ll.is_finite() {
            return None;
        }
        let g = natural_gradient(spec, &p, sample).ok()?;
        let th = p.as_array();
        Some((ll, free.iter().map(|&i| g[i] * th[i]).collect()))
    };
    let hessian = |u: &[f64]| -> Option<Matrix> {
        let p = unpack(u)?;
        let g = natural_gradient(spec, &p, sample).ok()?;
        let h = natural_hessian(spec, &p, sample).ok()?;
        let th = p.as_array();
        Some(
            free.iter()
                .map(|&i| free.iter().map(|&j| th[i] * th[j] * h[i][j] + if i == j { th[i] * g[i] } else { 0.0 }).collect())
                .collect(),
        )
    };
    let tol = Tolerances {
        grad: GRADIENT_TOL_PER_OBS * sample.len() as f64,
        step: STEP_TOL,
        max_iter: MAX_ITERATIONS,
        lower: PARAM_BOUNDS.0.ln(),
        upper: PARAM_BOUNDS.1.ln(),
    };
    let u0: Vec<f64> = free.iter().map(|&i| base[i].ln()).collect();
    let out = maximize(objective, hessian, &u0, &tol)?;
    let params = unpack(&out.x)?;
    let loglik = log_likelihood(spec, &params, sample).ok().filter(|v| v.is_finite())?;
    Some(Candidate { params, loglik, grad_norm: out.grad_norm, iterations: out.iterations })
}

/// Maximum likelihood fit of `spec` to `sample`.
///
/// Each start is optimized in log-parameter coordinates; the best
/// log-likelihood wins, ties going to the earliest start. For PNGKME-type
/// models with a free `λ`, the optimum of the same model at `λ = 1` is always
/// included as a start.
pub fn fit(spec: &ModelSpec, sample: &Sample, options: &FitOptions) -> Result<FitResult> {
    options.validate()?;
    if sample.len() < 2 {
        return Err(Error::Domain("fitting needs at least two observations".into()));
    }
    let mut starts = heuristic_starts(spec, sample);
    starts.truncate(options.restarts);
    let mut rng = RngStream::new(options.seed);
    while starts.len() < options.restarts {
        starts.push(random_start(&mut rng, sample));
    }
    if spec.family.is_pngkme_member() && spec.fixed_lambda.is_none() {
        let boundary = ModelSpec { fixed_lambda: Some(1.0), ..*spec };
        let sub = fit(&boundary, sample, &FitOptions { extra_starts: Vec::new(), ..options.clone() })?;
        starts.push(sub.estimates);
    }
    starts.extend(options.extra_starts.iter().copied());
    let mut unique: Vec<Params> = Vec::with_capacity(starts.len());
    for s in starts.into_iter().map(|s| spec.complete(s)) {
        if !unique.contains(&s) {
            unique.push(s);
        }
    }
    let starts = unique;

    let candidates: Vec<Option<Candidate>> = starts.par_iter().map(|&s| run_start(spec, sample, s)).collect();
    let mut best: Option<(usize, Candidate)> = None;
    for (i, c) in candidates.into_iter().enumerate() {
        let Some(c) = c else { continue };
        if best.as_ref().is_none_or(|(_, b)| c.loglik > b.loglik) {
            best = Some((i, c));
        }
    }
    let (best_start, best) =
        best.ok_or_else(|| Error::Domain(format!("no start produced a finite likelihood for {}", spec.family)))?;
    let estimates = best.params;
    let k = spec.free_count();
    let vcov = free_covariance(spec, &estimates, sample).ok();
    let ci = vcov.as_ref().and_then(|v| intervals_from(spec, &estimates, v, options.omega).ok());
    let grad_ok = best.grad_norm <= GRADIENT_TOL_PER_OBS * sample.len() as f64;
    Ok(FitResult {
        spec: *spec,
        estimates,
        free_parameters: spec.free_names().into_iter().map(String::from).collect(),
        loglik: best.loglik,
        neg2loglik: -2.0 * best.loglik,
        aic: -2.0 * best.loglik + 2.0 * k as f64,
        converged: grad_ok && vcov.is_some(),
        vcov,
        ci,
        omega: options.omega,
        trace: OptimizerTrace { iterations: best.iterations, gradient_norm: best.grad_norm, restarts_used: starts.len(), best_start },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{Lifetime, Pngkme};

    fn sample_from(p: Params, n: usize, seed: u64) -> Sample {
        Sample::new(Pngkme::new(p).sample(&mut RngStream::new(seed), n)).unwrap()
    }

    #[test]
    fn exponential_fit_is_closed_form() {
        let s = sample_from(Params::new(1.0, 2.0, 1.0).unwrap(), 10_000, 11);
        let f = fit(&ModelSpec::new(Family::Exponential), &s, &FitOptions::default()).unwrap();
        let closed = 1.0 / s.mean();
        assert!((f.estimates.beta - closed).abs() < 1e-8 * closed);
        assert!((f.estimates.beta - 2.0).abs() < 3.0 * 2.0 / 100.0);
        assert!(f.converged);
        assert_eq!(f.aic, -2.0 * f.loglik + 2.0);
    }

    #[test]
    fn pngkme_fit_recovers_truth_and_dominates_submodels() {
        let truth = Params::new(2.5, 1.5, 0.5).unwrap();
        let s = sample_from(truth, 2000, 5);
        let full = fit(&ModelSpec::new(Family::Pngkme), &s, &FitOptions::default()).unwrap();
        assert!(full.converged, "{full:?}");
        assert!((full.estimates.alpha - 2.5).abs() < 0.6);
        assert!((full.estimates.beta - 1.5).abs() < 0.3);
        for fam in [Family::Ee, Family::Pduse, Family::Ngkme, Family::Exponential] {
            let sub = fit(&ModelSpec::new(fam), &s, &FitOptions::default()).unwrap();
            assert!(full.loglik >= sub.loglik - 1e-6, "{fam:?}");
        }
        let ci = full.ci.unwrap();
        for iv in &ci {
            assert!(iv.lower < iv.estimate && iv.estimate < iv.upper);
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let s = sample_from(Params::new(1.5, 0.5, 3.0).unwrap(), 150, 8);
        let a = fit(&ModelSpec::new(Family::Pngkme), &s, &FitOptions::default()).unwrap();
        let b = fit(&ModelSpec::new(Family::Pngkme), &s, &FitOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn intervals_collapse_without_variance() {
        let spec = ModelSpec::new(Family::Ee);
        let est = Params::new(1.2, 0.3, 1.0).unwrap();
        let iv = intervals_from(&spec, &est, &vec![vec![0.0, 0.0], vec![0.0, 0.0]], 0.05).unwrap();
        assert_eq!((iv[0].lower, iv[0].upper), (1.2, 1.2));
        assert_eq!(iv[1].parameter, "beta");
    }

    #[test]
    fn bad_options_are_rejected() {
        let s = Sample::new(vec![1.0, 2.0]).unwrap();
        let spec = ModelSpec::new(Family::Exponential);
        assert!(fit(&spec, &s, &FitOptions { omega: 1.5, ..Default::default() }).is_err());
        assert!(fit(&spec, &s, &FitOptions { restarts: 0, ..Default::default() }).is_err());
        assert!(fit(&spec, &Sample::new(vec![1.0]).unwrap(), &FitOptions::default()).is_err());
    }
}
