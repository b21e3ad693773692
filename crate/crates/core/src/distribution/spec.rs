use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::competitors::{ExpWeibull, GammaDist, Weibull};
use super::pngkme::Pngkme;
use super::{Lifetime, Params};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pngkme,
    Ee,
    Duse,
    Apte,
    Gkme,
    Pgkme,
    Pduse,
    Pete,
    Ppete,
    Ngkme,
    Papte,
    Exponential,
    ExponentiatedWeibull,
    Weibull,
    Gamma,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Pngkme,
        Family::Ee,
        Family::Duse,
        Family::Apte,
        Family::Gkme,
        Family::Pgkme,
        Family::Pduse,
        Family::Pete,
        Family::Ppete,
        Family::Ngkme,
        Family::Papte,
        Family::Exponential,
        Family::ExponentiatedWeibull,
        Family::Weibull,
        Family::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pngkme => "PNGKME",
            Family::Ee => "EE",
            Family::Duse => "DUSE",
            Family::Apte => "APTE",
            Family::Gkme => "GKME",
            Family::Pgkme => "PGKME",
            Family::Pduse => "PDUSE",
            Family::Pete => "PETE",
            Family::Ppete => "PPETE",
            Family::Ngkme => "NGKME",
            Family::Papte => "PAPTE",
            Family::Exponential => "Exponential",
            Family::ExponentiatedWeibull => "EW",
            Family::Weibull => "Weibull",
            Family::Gamma => "Gamma",
        }
    }

    /// True for the members obtained by fixing parameters of the PNGKME law.
    pub fn is_pngkme_member(self) -> bool {
        !matches!(self, Family::ExponentiatedWeibull | Family::Weibull | Family::Gamma)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        let fam = match key.as_str() {
            "pngkme" => Family::Pngkme,
            "ee" => Family::Ee,
            "duse" => Family::Duse,
            "apte" => Family::Apte,
            "gkme" => Family::Gkme,
            "pgkme" | "pkme" => Family::Pgkme,
            "pduse" => Family::Pduse,
            "pete" => Family::Pete,
            "ppete" => Family::Ppete,
            "ngkme" => Family::Ngkme,
            "papte" => Family::Papte,
            "exponential" | "exp" => Family::Exponential,
            "ew" | "exponentiatedweibull" => Family::ExponentiatedWeibull,
            "weibull" => Family::Weibull,
            "gamma" => Family::Gamma,
            _ => return Err(Error::Parse(format!("unknown model '{s}'"))),
        };
        Ok(fam)
    }
}

/// A family member together with the parameters it holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub fixed_alpha: Option<f64>,
    pub fixed_lambda: Option<f64>,
}

impl ModelSpec {
    pub fn new(family: Family) -> Self {
        let (a, l) = match family {
            Family::Pngkme | Family::Papte => (None, None),
            Family::Ee => (None, Some(1.0)),
            Family::Duse => (Some(1.0), Some(1.0 / E)),
            Family::Apte | Family::Ngkme => (Some(1.0), None),
            Family::Gkme => (Some(1.0), Some(E)),
            Family::Pgkme => (None, Some(E)),
            Family::Pduse => (None, Some(1.0 / E)),
            Family::Pete => (Some(1.0), Some(1.0 / PI)),
            Family::Ppete => (None, Some(1.0 / PI)),
            Family::Exponential => (Some(1.0), Some(1.0)),
            Family::ExponentiatedWeibull | Family::Weibull | Family::Gamma => (None, None),
        };
        ModelSpec { family, fixed_alpha: a, fixed_lambda: l }
    }

    /// Which of `(alpha, beta, lambda)` the optimizer moves.
    pub fn free_mask(&self) -> [bool; 3] {
        match self.family {
            Family::Weibull | Family::Gamma => [true, true, false],
            _ => [self.fixed_alpha.is_none(), true, self.fixed_lambda.is_none()],
        }
    }

    pub fn free_count(&self) -> usize {
        self.free_mask().iter().filter(|&&b| b).count()
    }

    /// Parameter labels in `(alpha, beta, lambda)` order for free parameters.
    pub fn free_names(&self) -> Vec<&'static str> {
        ["alpha", "beta", "lambda"].into_iter().zip(self.free_mask()).filter(|(_, f)| *f).map(|(n, _)| n).collect()
    }

    /// Overwrites the fixed components of `p`.
    pub fn complete(&self, p: Params) -> Params {
        let mut q = p;
        if let Some(a) = self.fixed_alpha {
            q.alpha = a;
        }
        if let Some(l) = self.fixed_lambda {
            q.lambda = l;
        }
        if matches!(self.family, Family::Weibull | Family::Gamma) {
            q.lambda = 1.0;
        }
        q
    }

    pub fn model(&self, p: Params) -> Result<Model> {
        let q = self.complete(p);
        q.validate()?;
        Ok(match self.family {
            Family::ExponentiatedWeibull => Model::ExpWeibull(ExpWeibull::new(q.alpha, q.beta, q.lambda)?),
            Family::Weibull => Model::Weibull(Weibull::new(q.alpha, q.beta)?),
            Family::Gamma => Model::Gamma(GammaDist::new(q.alpha, q.beta)?),
            _ => Model::Pngkme(Pngkme::new(q)),
        })
    }
}

impl From<Family> for ModelSpec {
    fn from(f: Family) -> Self {
        ModelSpec::new(f)
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(ModelSpec::new(s.parse()?))
    }
}

/// A fully parameterized member of any supported family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Pngkme(Pngkme),
    ExpWeibull(ExpWeibull),
    Weibull(Weibull),
    Gamma(GammaDist),
}

impl Model {
    fn inner(&self) -> &dyn Lifetime {
        match self {
            Model::Pngkme(d) => d,
            Model::ExpWeibull(d) => d,
            Model::Weibull(d) => d,
            Model::Gamma(d) => d,
        }
    }
}

impl Lifetime for Model {
    fn ln_pdf(&self, x: f64) -> f64 {
        self.inner().ln_pdf(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        self.inner().cdf(x)
    }
    fn survival(&self, x: f64) -> f64 {
        self.inner().survival(x)
    }
    fn quantile(&self, u: f64) -> Result<f64> {
        self.inner().quantile(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submodel_table() {
        let m = |f| ModelSpec::new(f);
        assert_eq!(m(Family::Ee).fixed_lambda, Some(1.0));
        assert_eq!(m(Family::Duse).fixed_alpha, Some(1.0));
        assert_eq!(m(Family::Duse).fixed_lambda, Some((-1.0f64).exp()));
        assert_eq!(m(Family::Gkme).fixed_lambda, Some(E));
        assert_eq!(m(Family::Pete).fixed_lambda, Some(1.0 / PI));
        assert_eq!(m(Family::Pngkme).free_count(), 3);
        assert_eq!(m(Family::Papte).free_count(), 3);
        assert_eq!(m(Family::Apte).free_count(), 2);
        assert_eq!(m(Family::Ngkme).free_names(), vec!["beta", "lambda"]);
        assert_eq!(m(Family::Pgkme).free_names(), vec!["alpha", "beta"]);
        assert_eq!(m(Family::Exponential).free_count(), 1);
        assert_eq!(m(Family::Weibull).free_count(), 2);
        assert_eq!(m(Family::ExponentiatedWeibull).free_count(), 3);
        for f in Family::ALL {
            assert!((1..=3).contains(&m(f).free_count()));
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("pkme".parse::<Family>().unwrap(), Family::Pgkme);
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn submodels_share_the_full_code_path() {
        let free = Params::new(1.7, 0.3, 4.2).unwrap();
        for f in Family::ALL.into_iter().filter(|f| f.is_pngkme_member()) {
            let spec = ModelSpec::new(f);
            let sub = spec.model(free).unwrap();
            let full = Pngkme::new(spec.complete(free));
            for x in [0.0, 0.1, 1.0, 3.5, 20.0] {
                assert_eq!(sub.cdf(x).to_bits(), full.cdf(x).to_bits(), "{f} at {x}");
            }
        }
    }
}
