//! Goodness-of-fit statistics with p-values and AIC model comparison.

mod stats;

pub use stats::{
    ad_limit_cdf, ad_pvalue, ad_statistic, cvm_cdf, cvm_limit_cdf, cvm_pvalue, cvm_statistic, kolmogorov_survival,
    ks_pvalue, ks_statistic, CDF_CLAMP,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{Family, Lifetime, ModelSpec, Params, RngStream};
use crate::inference::{fit, FitOptions, FitResult, Sample};
use crate::{Error, Result};

/// How p-values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PvalueMethod {
    /// Limiting null distributions with the parameters treated as known.
    Asymptotic,
    /// Parametric bootstrap refitting the model on each replicate.
    Bootstrap { replicates: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub ks: f64,
    pub ks_p: f64,
    pub cvm: f64,
    pub cvm_p: f64,
    pub ad: f64,
    pub ad_p: f64,
    pub method: PvalueMethod,
    /// Bootstrap replicates whose refit failed or did not converge.
    pub bootstrap_failures: usize,
}

/// The three statistics `(Dₙ, W², A²)` of `params` under `spec`.
pub fn statistics(spec: &ModelSpec, params: &Params, sample: &[f64]) -> Result<(f64, f64, f64)> {
    let model = spec.model(*params)?;
    let cdf = |x| model.cdf(x);
    Ok((ks_statistic(cdf, sample), cvm_statistic(cdf, sample), ad_statistic(cdf, sample)))
}

/// Asymptotic p-values for already computed statistics.
pub fn gof_pvalues(stats: (f64, f64, f64), n: usize) -> GofReport {
    let (ks, cvm, ad) = stats;
    GofReport {
        ks,
        ks_p: ks_pvalue(ks, n),
        cvm,
        cvm_p: cvm_pvalue(cvm, n),
        ad,
        ad_p: ad_pvalue(ad),
        method: PvalueMethod::Asymptotic,
        bootstrap_failures: 0,
    }
}

/// Goodness of fit of `spec` at `params`.
///
/// With the bootstrap method, `params` should be the maximum likelihood
/// estimate on `sample`; each replicate is drawn from the fitted model and
/// refitted with `fit_options`, the replicate seed being split off
/// `fit_options.seed`.
pub fn gof_report(
    spec: &ModelSpec,
    params: &Params,
    sample: &Sample,
    method: PvalueMethod,
    fit_options: &FitOptions,
) -> Result<GofReport> {
    let observed = statistics(spec, params, sample.values())?;
    let n = sample.len();
    let PvalueMethod::Bootstrap { replicates } = method else {
        return Ok(gof_pvalues(observed, n));
    };
    if replicates == 0 {
        return Err(Error::Domain("bootstrap needs at least one replicate".into()));
    }
    let model = spec.model(*params)?;
    let replicate_stats: Vec<Option<(f64, f64, f64)>> = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::with_stream(fit_options.seed, b as u64 + 1);
            let draw = Sample::new(model.sample(&mut rng, n)).ok()?;
            let refit = fit(spec, &draw, fit_options).ok().filter(|f| f.converged)?;
            statistics(spec, &refit.estimates, draw.values()).ok()
        })
        .collect();
    let valid: Vec<(f64, f64, f64)> = replicate_stats.iter().flatten().copied().collect();
    let failures = replicates - valid.len();
    let p = |pick: fn(&(f64, f64, f64)) -> f64| {
        let exceed = valid.iter().filter(|s| pick(s) >= pick(&observed)).count();
        (1 + exceed) as f64 / (1 + valid.len()) as f64
    };
    Ok(GofReport {
        ks: observed.0,
        ks_p: p(|s| s.0),
        cvm: observed.1,
        cvm_p: p(|s| s.1),
        ad: observed.2,
        ad_p: p(|s| s.2),
        method,
        bootstrap_failures: failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub fit: FitOptions,
    pub method: PvalueMethod,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { fit: FitOptions::default(), method: PvalueMethod::Asymptotic }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub spec: ModelSpec,
    pub fit: Option<FitResult>,
    pub gof: Option<GofReport>,
    /// Set when the model could not be fitted or assessed at all.
    pub error: Option<String>,
}

impl ComparisonRow {
    pub fn converged(&self) -> bool {
        self.fit.as_ref().is_some_and(|f| f.converged)
    }

    pub fn aic(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.aic)
    }

    pub fn neg2loglik(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.neg2loglik)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub n: usize,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn row(&self, family: Family) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.spec.family == family)
    }
}

/// The fifteen models of the remission-time comparison, in listing order.
pub fn default_battery() -> Vec<ModelSpec> {
    [
        Family::Pngkme,
        Family::Ngkme,
        Family::Pgkme,
        Family::Gkme,
        Family::Papte,
        Family::Apte,
        Family::Pduse,
        Family::Duse,
        Family::Ppete,
        Family::Pete,
        Family::Ee,
        Family::ExponentiatedWeibull,
        Family::Weibull,
        Family::Gamma,
        Family::Exponential,
    ]
    .into_iter()
    .map(ModelSpec::new)
    .collect()
}

/// True when `sub` is obtained from `sup` by fixing more parameters.
fn nested_in(sub: &ModelSpec, sup: &ModelSpec) -> bool {
    let agrees = |s: Option<f64>, p: Option<f64>| p.is_none() || p == s;
    sub.family.is_pngkme_member()
        && sup.family.is_pngkme_member()
        && sub.free_count() < sup.free_count()
        && agrees(sub.fixed_alpha, sup.fixed_alpha)
        && agrees(sub.fixed_lambda, sup.fixed_lambda)
}

/// Fits every spec, assesses each fit and ranks the rows by AIC.
///
/// Specs are fitted in order of increasing dimension so that each model can
/// be restarted from the optima of the models nested in it. Rows whose fit
/// did not converge follow all converged rows, and rows that failed outright
/// come last.
pub fn compare_models(sample: &Sample, specs: &[ModelSpec], options: &CompareOptions) -> Result<ComparisonTable> {
    if specs.is_empty() {
        return Err(Error::Domain("no models to compare".into()));
    }
    let mut fits: Vec<Option<std::result::Result<FitResult, String>>> = vec![None; specs.len()];
    for dim in 1..=3 {
        let batch: Vec<usize> = (0..specs.len()).filter(|&i| specs[i].free_count() == dim).collect();
        let done: Vec<(usize, std::result::Result<FitResult, String>)> = batch
            .par_iter()
            .map(|&i| {
                let mut opts = options.fit.clone();
                for (j, f) in fits.iter().enumerate() {
                    if let Some(Ok(f)) = f {
                        if nested_in(&specs[j], &specs[i]) {
                            opts.extra_starts.push(f.estimates);
                        }
                    }
                }
                (i, fit(&specs[i], sample, &opts).map_err(|e| e.to_string()))
            })
            .collect();
        for (i, r) in done {
            fits[i] = Some(r);
        }
    }
    let rows: Vec<ComparisonRow> = specs
        .par_iter()
        .zip(fits)
        .map(|(spec, f)| {
            let model = spec.family.name().to_string();
            match f.expect("every spec has one to three free parameters") {
                Err(e) => ComparisonRow { model, spec: *spec, fit: None, gof: None, error: Some(e) },
                Ok(fr) => match gof_report(spec, &fr.estimates, sample, options.method, &options.fit) {
                    Ok(g) => ComparisonRow { model, spec: *spec, fit: Some(fr), gof: Some(g), error: None },
                    Err(e) => ComparisonRow { model, spec: *spec, fit: Some(fr), gof: None, error: Some(e.to_string()) },
                },
            }
        })
        .collect();
    let mut rows = rows;
    rows.sort_by(|a, b| {
        let rank = |r: &ComparisonRow| match (&r.fit, r.converged()) {
            (None, _) => 2,
            (Some(_), false) => 1,
            _ => 0,
        };
        rank(a).cmp(&rank(b)).then(a.aic().unwrap_or(f64::INFINITY).total_cmp(&b.aic().unwrap_or(f64::INFINITY)))
    });
    Ok(ComparisonTable { n: sample.len(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Pngkme;

    fn draws(p: Params, n: usize, seed: u64) -> Sample {
        Sample::new(Pngkme::new(p).sample(&mut RngStream::new(seed), n)).unwrap()
    }

    #[test]
    fn zero_distance_gives_unit_pvalue() {
        assert_eq!(gof_pvalues((0.0, 0.0, 0.0), 40).ks_p, 1.0);
    }

    #[test]
    fn nesting_relation() {
        let s = |f| ModelSpec::new(f);
        assert!(nested_in(&s(Family::Ee), &s(Family::Pngkme)));
        assert!(nested_in(&s(Family::Exponential), &s(Family::Ngkme)));
        assert!(!nested_in(&s(Family::Duse), &s(Family::Ee)));
        assert!(!nested_in(&s(Family::Gamma), &s(Family::Pngkme)));
        assert!(!nested_in(&s(Family::Pngkme), &s(Family::Pngkme)));
    }

    #[test]
    fn single_spec_gives_single_row() {
        let s = draws(Params::new(1.0, 0.5, 1.0).unwrap(), 60, 3);
        let t = compare_models(&s, &[ModelSpec::new(Family::Exponential)], &CompareOptions::default()).unwrap();
        assert_eq!(t.rows.len(), 1);
        let r = &t.rows[0];
        let f = r.fit.as_ref().unwrap();
        assert_eq!(f.aic, -2.0 * f.loglik + 2.0);
        assert!(compare_models(&s, &[], &CompareOptions::default()).is_err());
    }

    #[test]
    fn table_is_sorted_and_supermodel_dominates() {
        let s = draws(Params::new(2.0, 0.7, 6.0).unwrap(), 150, 21);
        let t = compare_models(&s, &default_battery(), &CompareOptions::default()).unwrap();
        assert_eq!(t.rows.len(), 15);
        let aics: Vec<f64> = t.rows.iter().filter(|r| r.converged()).map(|r| r.aic().unwrap()).collect();
        assert!(aics.windows(2).all(|w| w[0] <= w[1]));
        let full = t.row(Family::Pngkme).unwrap().fit.as_ref().unwrap().loglik;
        for r in &t.rows {
            if r.spec.family.is_pngkme_member() {
                assert!(full >= r.fit.as_ref().unwrap().loglik - 1e-6, "{}", r.model);
            }
            let g = r.gof.as_ref().unwrap();
            for p in [g.ks_p, g.cvm_p, g.ad_p] {
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }

    #[test]
    fn bootstrap_pvalues_are_calibrated() {
        let spec = ModelSpec::new(Family::Exponential);
        let opts = FitOptions { restarts: 2, ..Default::default() };
        let mut inside = 0;
        for d in 0..40u64 {
            let s = draws(Params::new(1.0, 1.3, 1.0).unwrap(), 50, 1000 + d);
            let f = fit(&spec, &s, &opts).unwrap();
            let fo = FitOptions { seed: 77 + d, ..opts.clone() };
            let g = gof_report(&spec, &f.estimates, &s, PvalueMethod::Bootstrap { replicates: 200 }, &fo).unwrap();
            assert_eq!(g.bootstrap_failures, 0);
            if g.ks_p > 0.01 && g.ks_p < 0.99 {
                inside += 1;
            }
        }
        assert!(inside >= 38, "{inside}");
    }
}
