//! Competitor lifetime laws for model comparison.

use statrs::distribution::{ContinuousCDF, Gamma as StatrsGamma};

use super::{check_probability, Lifetime};
use crate::numerics::{log_gamma, lower_regularized_gamma};
use crate::{Error, Result};

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Exponentiated Weibull: `F(x) = (1 − e^{−βx^λ})^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpWeibull {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl ExpWeibull {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("lambda", lambda)?;
        Ok(ExpWeibull { alpha, beta, lambda })
    }
}

impl Lifetime for ExpWeibull {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let t = self.beta * x.powf(self.lambda);
        let ln_g = (-(-t).exp_m1()).ln();
        let mut v = self.alpha.ln() + self.beta.ln() + self.lambda.ln() + (self.lambda - 1.0) * x.ln() - t;
        if self.alpha != 1.0 {
            v += (self.alpha - 1.0) * ln_g;
        }
        v
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let t = self.beta * x.powf(self.lambda);
        (self.alpha * (-(-t).exp_m1()).ln()).exp()
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        let t = self.beta * x.powf(self.lambda);
        -(self.alpha * (-(-t).exp()).ln_1p()).exp_m1()
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_probability(u)?;
        let s = -(u.ln() / self.alpha).exp_m1();
        Ok((-s.ln() / self.beta).powf(1.0 / self.lambda))
    }
}

/// Weibull with shape `shape` and rate `rate = 1/σ`:
/// `F(x) = 1 − exp(−(rate·x)^shape)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weibull {
    pub shape: f64,
    pub rate: f64,
}

impl Weibull {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        positive("shape", shape)?;
        positive("rate", rate)?;
        Ok(Weibull { shape, rate })
    }

    pub fn scale(&self) -> f64 {
        1.0 / self.rate
    }
}

impl Lifetime for Weibull {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let z = self.rate * x;
        self.shape.ln() + self.rate.ln() + (self.shape - 1.0) * z.ln() - z.powf(self.shape)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-(self.rate * x).powf(self.shape)).exp_m1()
        }
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-(self.rate * x).powf(self.shape)).exp()
        }
    }

    fn ln_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(self.rate * x).powf(self.shape)
        }
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_probability(u)?;
        Ok((-(-u).ln_1p()).powf(1.0 / self.shape) / self.rate)
    }
}

/// Gamma with shape `shape` and rate `rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDist {
    pub shape: f64,
    pub rate: f64,
}

impl GammaDist {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        positive("shape", shape)?;
        positive("rate", rate)?;
        Ok(GammaDist { shape, rate })
    }
}

impl Lifetime for GammaDist {
    fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let lg = log_gamma(self.shape).expect("positive shape");
        if x == 0.0 {
            return match self.shape {
                a if a == 1.0 => self.rate.ln(),
                a if a > 1.0 => f64::NEG_INFINITY,
                _ => f64::INFINITY,
            };
        }
        self.shape * self.rate.ln() + (self.shape - 1.0) * x.ln() - self.rate * x - lg
    }

    fn cdf(&self, x: f64) -> f64 {
        lower_regularized_gamma(self.shape, self.rate * x)
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else if x.is_infinite() {
            0.0
        } else {
            statrs::function::gamma::gamma_ur(self.shape, self.rate * x)
        }
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_probability(u)?;
        let g = StatrsGamma::new(self.shape, self.rate).map_err(|e| Error::Domain(e.to_string()))?;
        Ok(g.inverse_cdf(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    #[test]
    fn ew_reduces_to_exponential() {
        let ew = ExpWeibull::new(1.0, 0.4, 1.0).unwrap();
        for x in [0.1, 1.0, 5.0] {
            assert!((ew.pdf(x) - 0.4 * (-0.4 * x).exp()).abs() < 1e-15);
            assert!((ew.cdf(x) + (-0.4 * x).exp_m1()).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_reduces_to_exponential() {
        let g = GammaDist::new(1.0, 0.1068).unwrap();
        assert!((g.pdf(0.0) - 0.1068).abs() < 1e-15);
        assert!((g.pdf(3.0) - 0.1068 * (-0.3204f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn densities_integrate_to_one() {
        let ew = ExpWeibull::new(2.7951, 0.2989, 0.6543).unwrap();
        let r = integrate(|x| ew.pdf(x), 0.0, f64::INFINITY, 1e-12);
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
        let w = Weibull::new(1.0478, 0.1046).unwrap();
        assert!((integrate(|x| w.pdf(x), 0.0, f64::INFINITY, 1e-12).value - 1.0).abs() < 1e-8);
        let g = GammaDist::new(1.1725, 0.1252).unwrap();
        assert!((integrate(|x| g.pdf(x), 0.0, f64::INFINITY, 1e-12).value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cdf_matches_integrated_density() {
        let ew = ExpWeibull::new(2.7951, 0.2989, 0.6543).unwrap();
        let w = Weibull::new(1.3, 0.5).unwrap();
        let g = GammaDist::new(2.2, 0.7).unwrap();
        let laws: [&dyn Lifetime; 3] = [&ew, &w, &g];
        for law in laws {
            for x in [0.5, 2.0, 6.0] {
                let num = integrate(|t| law.pdf(t), 0.0, x, 1e-12).value;
                assert!((num - law.cdf(x)).abs() < 1e-9);
                assert!((law.cdf(x) + law.survival(x) - 1.0).abs() < 1e-14);
                let u = law.cdf(x);
                assert!((law.quantile(u).unwrap() - x).abs() < 1e-7 * x);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Weibull::new(0.0, 1.0).is_err());
        assert!(GammaDist::new(1.0, -1.0).is_err());
        assert!(ExpWeibull::new(1.0, 1.0, f64::NAN).is_err());
    }
}
