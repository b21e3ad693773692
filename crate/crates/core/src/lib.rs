//! The power new-generalized Kavya–Manoharan exponential (PNGKME) lifetime
//! distribution.
//!
//! The crate covers the full workflow around the family:
//!
//! - [`distribution`]: the three-parameter PNGKME law, its eleven named
//!   submodels, and the competitor laws used for model comparison
//!   (exponentiated Weibull, Weibull, gamma).
//! - [`properties`]: moments, generating functions, mean residual life, mean
//!   deviations, Lorenz/Bonferroni curves, Rényi entropy, stress-strength
//!   reliability and order statistics. Each series form has an independent
//!   quadrature counterpart.
//! - [`inference`]: log-likelihood, analytic score and observed information,
//!   multi-start maximum likelihood with log-based confidence intervals.
//! - [`gof`]: Kolmogorov–Smirnov, Cramér–von Mises and Anderson–Darling
//!   statistics with p-values, and AIC-ranked comparison tables.
//! - [`simstudy`]: Monte Carlo bias/MSE study of the estimators.
//! - [`cli`]: the command-line front end behind the `pngkme` binary.
//!
//! ```
//! use pngkme::distribution::{Lifetime, Params, Pngkme};
//!
//! let dist = Pngkme::new(Params::new(2.0, 1.0, 2.0).unwrap());
//! let median = dist.median();
//! assert!((dist.cdf(median) - 0.5).abs() < 1e-12);
//! ```

pub mod cli;
pub mod data;
pub mod distribution;
mod error;
pub mod gof;
pub mod inference;
pub mod numerics;
pub mod properties;
pub mod simstudy;

pub use error::{Error, Result};
