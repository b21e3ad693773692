//! Numerical building blocks shared by the rest of the crate: special
//! functions, adaptive quadrature, accelerated series summation, finite
//! differences and small symmetric linear algebra.
//!
//! Everything here is a pure function of its inputs.

mod diff;
mod linalg;
mod quadrature;
mod series;
mod special;

pub use diff::{fd_gradient, fd_hessian, FD_GRADIENT_STEP, FD_HESSIAN_STEP};
pub use linalg::{invert_3x3_symmetric, invert_symmetric, Matrix};
pub use quadrature::{integrate, integrate_breaks, QuadratureResult, DEFAULT_QUAD_REL_TOL};
pub use series::{sum_double_series, sum_double_series_from, sum_series, SeriesControl, SeriesSum};
pub use special::{
    alt_binomial, bessel_k_scaled, digamma, ln_binomial_int, ln_gamma_ratio, log_gamma, lower_regularized_gamma, poisson_pmf,
    standard_normal_cdf, standard_normal_quantile, upper_incomplete_gamma,
};
