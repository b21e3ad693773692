//! Central finite differences, used as the reference for analytic
//! derivatives of the log-likelihood.

use crate::numerics::Matrix;

pub const FD_GRADIENT_STEP: f64 = 1e-6;
pub const FD_HESSIAN_STEP: f64 = 1e-4;

fn step(x: f64, h_rel: f64) -> f64 {
    h_rel * x.abs().max(1.0)
}

pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h_rel: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = step(x[i], h_rel);
            p[i] = x[i] + h;
            let up = f(&p);
            p[i] = x[i] - h;
            let down = f(&p);
            p[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn fd_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h_rel: f64) -> Matrix {
    let n = x.len();
    let mut h = vec![vec![0.0; n]; n];
    let mut p = x.to_vec();
    let f0 = f(x);
    for i in 0..n {
        let hi = step(x[i], h_rel);
        p[i] = x[i] + hi;
        let up = f(&p);
        p[i] = x[i] - hi;
        let down = f(&p);
        p[i] = x[i];
        h[i][i] = (up - 2.0 * f0 + down) / (hi * hi);
        for j in 0..i {
            let hj = step(x[j], h_rel);
            let mut eval = |si: f64, sj: f64| {
                p[i] = x[i] + si * hi;
                p[j] = x[j] + sj * hj;
                let v = f(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * hi * hj);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_simple_functions() {
        let g = fd_gradient(|x| x[0] * x[0], &[3.0], FD_GRADIENT_STEP);
        assert!((g[0] - 6.0).abs() < 1e-8);
        let g = fd_gradient(|x| x[0] * x[1], &[2.0, 5.0], FD_GRADIENT_STEP);
        assert!((g[0] - 5.0).abs() < 1e-8 && (g[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn hessian_of_quadratic_form() {
        let f = |x: &[f64]| 2.0 * x[0] * x[0] + 3.0 * x[0] * x[1] - x[1] * x[1] + x[2];
        let h = fd_hessian(f, &[0.3, -1.2, 4.0], FD_HESSIAN_STEP);
        let expect = [[4.0, 3.0, 0.0], [3.0, -2.0, 0.0], [0.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[i][j] - expect[i][j]).abs() < 1e-6, "{h:?}");
            }
        }
    }
}
