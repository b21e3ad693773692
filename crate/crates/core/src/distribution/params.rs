use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shape `alpha`, rate `beta` and transform shape `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        let p = Params { alpha, beta, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("lambda", self.lambda)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.lambda]
    }

    pub fn from_array(a: [f64; 3]) -> Result<Self> {
        Params::new(a[0], a[1], a[2])
    }
}
