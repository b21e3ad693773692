//! Likelihood, score, observed information and maximum likelihood fitting.

mod fit;
mod likelihood;
mod optimize;

pub use fit::{
    confidence_intervals, fit, FitOptions, FitResult, Interval, OptimizerTrace, DEFAULT_OMEGA, DEFAULT_RESTARTS,
    DEFAULT_SEED, GRADIENT_TOL_PER_OBS, MAX_ITERATIONS, PARAM_BOUNDS,
};
pub use likelihood::{
    log_likelihood, log_likelihood_closed_form, natural_gradient, natural_hessian, observed_information, score,
    ObservedInfo,
};

use crate::{Error, Result};

/// A validated sample of strictly positive, finite lifetimes.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sum: f64,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sample is empty".into()));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!("observation {} is not a positive finite number: {v}", i + 1)));
        }
        let sum = values.iter().sum();
        Ok(Sample { values, sum })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_values() {
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, 0.0]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
        assert!(Sample::new(vec![-2.0]).is_err());
        let s = Sample::new(vec![1.0, 3.0]).unwrap();
        assert_eq!((s.len(), s.mean()), (2, 2.0));
    }
}
