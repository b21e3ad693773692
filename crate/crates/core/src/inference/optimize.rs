//! Quasi-Newton maximization with a Newton polish.

use crate::numerics::{invert_symmetric, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tolerances {
    /// Sup-norm of the gradient at which the search stops.
    pub grad: f64,
    /// Relative step size at which the search stops.
    pub step: f64,
    pub max_iter: usize,
    /// Box on every coordinate.
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn clamp(x: &mut [f64], tol: &Tolerances) {
    for v in x.iter_mut() {
        *v = v.clamp(tol.lower, tol.upper);
    }
}

/// Maximizes `f` starting from `x0` by BFGS with backtracking line search.
///
/// `f` returns the objective and its gradient, or `None` outside its domain.
/// `hess` optionally supplies the exact Hessian for a final Newton polish.
pub(crate) fn maximize<F, H>(f: F, hess: H, x0: &[f64], tol: &Tolerances) -> Option<Outcome>
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
    H: Fn(&[f64]) -> Option<Matrix>,
{
    let d = x0.len();
    let mut x = x0.to_vec();
    clamp(&mut x, tol);
    let (mut fx, mut gx) = f(&x)?;
    if !fx.is_finite() {
        return None;
    }
    // inverse Hessian approximation of −f
    let mut h: Matrix = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 / (1.0 + sup_norm(&gx)) } else { 0.0 }).collect()).collect();
    let mut iterations = 0;
    let mut fresh = true;
    while iterations < tol.max_iter {
        if sup_norm(&gx) <= tol.grad {
            break;
        }
        iterations += 1;
        // ascent direction p = H g
        let p: Vec<f64> = (0..d).map(|i| (0..d).map(|j| h[i][j] * gx[j]).sum()).collect();
        let slope: f64 = p.iter().zip(&gx).map(|(a, b)| a * b).sum();
        if !(slope > 0.0) {
            if fresh {
                break;
            }
            h = identity_scaled(d, 1.0 / (1.0 + sup_norm(&gx)));
            fresh = true;
            continue;
        }
        let max_move = sup_norm(&p);
        let mut t = if max_move > 2.0 { 2.0 / max_move } else { 1.0 };
        let mut accepted = None;
        for _ in 0..60 {
            let mut xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            clamp(&mut xn, tol);
            if let Some((fnew, gnew)) = f(&xn) {
                if fnew.is_finite() && fnew >= fx + 1e-4 * t * slope {
                    accepted = Some((xn, fnew, gnew));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            if fresh {
                break;
            }
            h = identity_scaled(d, 1.0 / (1.0 + sup_norm(&gx)));
            fresh = true;
            continue;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        // curvature of −f
        let y: Vec<f64> = gx.iter().zip(&gnew).map(|(a, b)| a - b).collect();
        let small_step = s.iter().zip(&x).all(|(si, xi)| si.abs() <= tol.step * xi.abs().max(1.0));
        x = xn;
        fx = fnew;
        gx = gnew;
        fresh = false;
        if small_step {
            break;
        }
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-300 {
            bfgs_update(&mut h, &s, &y, sy);
        }
    }
    let mut out = Outcome { grad_norm: sup_norm(&gx), x, value: fx, iterations };
    newton_polish(&f, &hess, &mut out, tol);
    Some(out)
}

fn identity_scaled(d: usize, s: f64) -> Matrix {
    (0..d).map(|i| (0..d).map(|j| if i == j { s } else { 0.0 }).collect()).collect()
}

fn bfgs_update(h: &mut Matrix, s: &[f64], y: &[f64], sy: f64) {
    let d = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..d).map(|i| (0..d).map(|j| h[i][j] * y[j]).sum()).collect();
    let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
    for i in 0..d {
        for j in 0..d {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

/// Newton steps on the exact Hessian while they keep improving the objective.
fn newton_polish<F, H>(f: &F, hess: &H, out: &mut Outcome, tol: &Tolerances)
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
    H: Fn(&[f64]) -> Option<Matrix>,
{
    const MAX_NEWTON: usize = 20;
    for _ in 0..MAX_NEWTON {
        let Some((_, g)) = f(&out.x) else { return };
        if sup_norm(&g) <= tol.grad * 1e-3 {
            out.grad_norm = sup_norm(&g);
            return;
        }
        let Some(hm) = hess(&out.x) else { return };
        let neg: Matrix = hm.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let Ok(inv) = invert_symmetric(&neg) else { return };
        let step: Vec<f64> = (0..g.len()).map(|i| (0..g.len()).map(|j| inv[i][j] * g[j]).sum()).collect();
        let mut xn: Vec<f64> = out.x.iter().zip(&step).map(|(a, b)| a + b).collect();
        clamp(&mut xn, tol);
        match f(&xn) {
            Some((fnew, gnew)) if fnew.is_finite() && fnew >= out.value - 1e-12 * out.value.abs().max(1.0) => {
                if sup_norm(&gnew) > sup_norm(&g) && fnew <= out.value {
                    return;
                }
                out.x = xn;
                out.value = fnew;
                out.grad_norm = sup_norm(&gnew);
                out.iterations += 1;
            }
            _ => return,
        }
    }
}
