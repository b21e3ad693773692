//! The PNGKME law, its named submodels and the three competitor lifetime
//! distributions used in model comparison.

mod competitors;
mod params;
mod pngkme;
mod rng;
mod spec;

pub use competitors::{ExpWeibull, GammaDist, Weibull};
pub use params::Params;
pub use pngkme::{Pngkme, LAMBDA_SWITCH};
pub use rng::{RngStream, RNG_ALGORITHM};
pub use spec::{Family, Model, ModelSpec};

use crate::{Error, Result};

/// Common interface of the continuous lifetime laws on `[0, ∞)`.
pub trait Lifetime {
    fn ln_pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    fn survival(&self, x: f64) -> f64;
    fn quantile(&self, u: f64) -> Result<f64>;

    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn ln_survival(&self, x: f64) -> f64 {
        self.survival(x).ln()
    }

    /// `pdf / survival`; fails where the survival function has underflowed.
    fn hazard(&self, x: f64) -> Result<f64> {
        let ls = self.ln_survival(x);
        if ls == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("hazard undefined at x = {x}: survival underflows")));
        }
        Ok((self.ln_pdf(x) - ls).exp())
    }

    fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid probability")
    }

    fn quartiles(&self) -> (f64, f64, f64) {
        let q = |u| self.quantile(u).expect("valid probability");
        (q(0.25), q(0.5), q(0.75))
    }

    /// `n` independent draws by inversion.
    fn sample(&self, rng: &mut RngStream, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.quantile(rng.uniform()).expect("open uniform")).collect()
    }
}

pub(crate) fn check_probability(u: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) {
        Ok(())
    } else {
        Err(Error::Domain(format!("probability must lie in [0, 1], got {u}")))
    }
}
