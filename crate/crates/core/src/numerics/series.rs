//! Summation of the infinite series behind the closed-form properties.
//!
//! Terms are added one at a time. A sum is accepted either when its tail has
//! visibly died out (three consecutive non-increasing terms under tolerance)
//! or, for slowly converging tails, when three successive extrapolated
//! estimates agree. Monotone tails are extrapolated from geometrically
//! sampled partial sums; sign-changing tails use the Levin u-transform.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of terms per summation index.
    pub max_terms_per_index: usize,
    /// Agreement required between successive accelerated estimates.
    pub accel_rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { rel_tol: 1e-12, abs_tol: 1e-300, max_terms_per_index: 500, accel_rel_tol: 1e-8 }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_terms_per_index < 10 || !(self.accel_rel_tol > 0.0) {
            return Err(Error::Domain(format!("invalid series control {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    pub accelerated: bool,
}

const MIN_LEVIN_ORDER: usize = 4;
const MAX_LEVIN_ORDER: usize = 10;

/// Levin u-transform `L_k^{(n0)}` built on terms `n0 ..= n0 + k`.
///
/// The transform is anchored at a fixed origin and its order grows with
/// each new term. Sliding a fixed-order window to large indices instead
/// cancels catastrophically on logarithmically convergent tails.
fn levin_u(terms: &[f64], partials: &[f64], first_index: usize, n0: usize, k: usize) -> Option<f64> {
    if terms.len() < n0 + k + 1 {
        return None;
    }
    let last = (first_index + n0 + k) as f64 + 1.0;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut binom = 1.0;
    // partial sums are taken relative to S_{n0} so their rounding error
    // scales with the tail rather than with the whole sum
    let mut local = 0.0;
    for j in 0..=k {
        let a = terms[n0 + j];
        if j > 0 {
            local += a;
        }
        if a == 0.0 || !a.is_finite() {
            return None;
        }
        let n = (first_index + n0 + j) as f64 + 1.0;
        let w = binom * (n / last).powi(k as i32 - 1) / (n * a);
        let w = if j % 2 == 1 { -w } else { w };
        num += w * local;
        den += w;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let v = partials[n0] + num / den;
    v.is_finite().then_some(v)
}

/// True when the last few terms shrink but their ratios creep towards one,
/// the regime of logarithmic and slow linear convergence. Super-geometric
/// tails (Poisson-like) are left to plain summation.
fn slow_tail(terms: &[f64]) -> bool {
    let m = terms.len();
    if m < 4 {
        return false;
    }
    let r: Vec<f64> = terms[m - 4..].windows(2).map(|w| (w[1] / w[0]).abs()).collect();
    r.iter().all(|&q| q <= 1.0 && q > 0.5) && r.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9))
}

/// Growth factor of the geometric sampling used for monotone logarithmic tails.
const GPS_RATIO: f64 = 1.3;
const GPS_MAX_ORDER: usize = 8;

/// Extrapolates partial sums sampled at geometrically spaced term counts
/// `n_l`, modelling `S_n = S + n·a_n·Σ_i β_i n^{−i}` and eliminating the
/// unknowns by divided differences in `1/n` (Sidi's W-algorithm). Geometric
/// spacing keeps the elimination well conditioned where consecutive-term
/// Levin transforms lose all their digits.
fn gps_extrapolate(samples: &[(f64, f64, f64)]) -> Option<f64> {
    let (base, _, _) = samples[0];
    let t: Vec<f64> = samples.iter().map(|&(_, _, n)| 1.0 / n).collect();
    let mut m: Vec<f64> = samples.iter().map(|&(sn, w, _)| (sn - base) / w).collect();
    let mut d: Vec<f64> = samples.iter().map(|&(_, w, _)| 1.0 / w).collect();
    for p in 1..samples.len() {
        for l in 0..samples.len() - p {
            let h = t[l + p] - t[l];
            m[l] = (m[l + 1] - m[l]) / h;
            d[l] = (d[l + 1] - d[l]) / h;
        }
    }
    let v = base + m[0] / d[0];
    v.is_finite().then_some(v)
}

fn same_sign_tail(terms: &[f64]) -> bool {
    let m = terms.len();
    m >= 4 && terms[m - 4..].iter().all(|&t| t.signum() == terms[m - 1].signum())
}

fn agreed(estimates: &[f64], ctrl: &SeriesControl) -> Option<f64> {
    if let [.., e0, e1, e2] = *estimates {
        let acc_tol = (ctrl.accel_rel_tol * e2.abs()).max(ctrl.abs_tol);
        if (e2 - e1).abs() <= acc_tol && (e1 - e0).abs() <= acc_tol {
            return Some(e2);
        }
    }
    None
}

/// Sums `term(n)` for `n = start, start + 1, …`.
pub fn sum_series<F: FnMut(usize) -> f64>(start: usize, mut term: F, ctrl: &SeriesControl) -> Result<SeriesSum> {
    let mut terms: Vec<f64> = Vec::with_capacity(64);
    let mut partials: Vec<f64> = Vec::with_capacity(64);
    let mut sum = 0.0;
    let mut origin: Option<usize> = None;
    let mut estimates: Vec<f64> = Vec::new();
    let mut gps_next = 4usize;
    let mut gps_samples: Vec<(f64, f64, f64)> = Vec::new();
    let mut gps_estimates: Vec<f64> = Vec::new();
    for i in 0..ctrl.max_terms_per_index {
        let t = term(start + i);
        if !t.is_finite() {
            return Err(Error::SeriesNonConvergence { terms: i + 1, partial: sum });
        }
        sum += t;
        terms.push(t);
        partials.push(sum);
        let tol = (ctrl.rel_tol * sum.abs()).max(ctrl.abs_tol);
        if i >= 2 {
            let (a, b, c) = (terms[i - 2].abs(), terms[i - 1].abs(), t.abs());
            if c <= tol && b <= tol && a <= tol && c <= b && b <= a {
                return Ok(SeriesSum { value: sum, terms: i + 1, accelerated: false });
            }
        }
        let gps_point = i + 1 == gps_next;
        if gps_point {
            gps_next = ((gps_next as f64 * GPS_RATIO) as usize).max(gps_next + 1);
        }
        if !slow_tail(&terms) {
            origin = None;
            estimates.clear();
            gps_samples.clear();
            gps_estimates.clear();
            continue;
        }
        if same_sign_tail(&terms) {
            origin = None;
            estimates.clear();
            if !gps_point {
                continue;
            }
            let n = (start + i + 1) as f64;
            gps_samples.push((sum, n * t, n));
            if gps_samples.len() > GPS_MAX_ORDER + 1 {
                gps_samples.remove(0);
            }
            if gps_samples.len() > MIN_LEVIN_ORDER {
                if let Some(e) = gps_extrapolate(&gps_samples) {
                    gps_estimates.push(e);
                    if let Some(v) = agreed(&gps_estimates, ctrl) {
                        return Ok(SeriesSum { value: v, terms: i + 1, accelerated: true });
                    }
                }
            }
            continue;
        }
        gps_samples.clear();
        gps_estimates.clear();
        let mut n0 = *origin.get_or_insert(i - 3);
        if i - n0 > MAX_LEVIN_ORDER {
            // start a fresh transform further out
            n0 = i - MIN_LEVIN_ORDER;
            origin = Some(n0);
            estimates.clear();
        }
        let k = i - n0;
        if k < MIN_LEVIN_ORDER {
            continue;
        }
        match levin_u(&terms, &partials, start, n0, k) {
            Some(e) => estimates.push(e),
            None => {
                origin = None;
                estimates.clear();
                continue;
            }
        }
        if let Some(v) = agreed(&estimates, ctrl) {
            return Ok(SeriesSum { value: v, terms: i + 1, accelerated: true });
        }
    }
    Err(Error::SeriesNonConvergence { terms: ctrl.max_terms_per_index, partial: sum })
}

/// `Σ_{j≥0} Σ_{k≥1} term(j, k)`.
pub fn sum_double_series<F: FnMut(usize, usize) -> f64>(term: F, ctrl: &SeriesControl) -> Result<SeriesSum> {
    sum_double_series_from(0, 1, term, ctrl)
}

/// `Σ_{j≥j0} Σ_{k≥k0} term(j, k)`; the inner sum is completed for every
/// outer index before the outer tail test runs.
/// Inner sums are carried to a tighter tolerance than the outer one so that
/// their truncation noise does not dominate the outer acceleration.
const INNER_TOL_FACTOR: f64 = 1e-4;

pub fn sum_double_series_from<F: FnMut(usize, usize) -> f64>(
    j0: usize,
    k0: usize,
    mut term: F,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    ctrl.validate()?;
    let mut inner_failure = None;
    let mut total_terms = 0;
    let inner_ctrl = SeriesControl { rel_tol: ctrl.rel_tol * INNER_TOL_FACTOR, ..*ctrl };
    let outer = sum_series(
        j0,
        |j| {
            if inner_failure.is_some() {
                return f64::NAN;
            }
            match sum_series(k0, |k| term(j, k), &inner_ctrl) {
                Ok(s) => {
                    total_terms += s.terms;
                    s.value
                }
                Err(e) => {
                    inner_failure = Some(e);
                    f64::NAN
                }
            }
        },
        ctrl,
    );
    if let Some(e) = inner_failure {
        return Err(e);
    }
    outer.map(|s| SeriesSum { terms: total_terms, ..s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_series() {
        let s = sum_double_series(|_, _| 0.0, &SeriesControl::default()).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn product_of_geometric_series() {
        let s = sum_double_series(|j, k| 0.5f64.powi((j + k) as i32), &SeriesControl::default()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn geometric_products_other_ratios() {
        let ctrl = SeriesControl::default();
        for (p, q) in [(0.3, 0.7), (0.9, 0.1), (0.95, 0.5)] {
            let s = sum_double_series(|j, k| f64::powi(p, j as i32) * f64::powi(q, k as i32), &ctrl).unwrap();
            let exact = 1.0 / (1.0 - p) * q / (1.0 - q);
            assert!(((s.value - exact) / exact).abs() < 1e-10, "p={p} q={q} {s:?}");
        }
    }

    #[test]
    fn logarithmic_tail_is_accelerated() {
        // ζ(2.5)
        let s = sum_series(1, |n| (n as f64).powf(-2.5), &SeriesControl::default()).unwrap();
        assert!(s.accelerated);
        assert!((s.value - 1.341487257250917).abs() < 1e-9, "{s:?}");
    }

    #[test]
    fn alternating_slow_series() {
        // ln 2 = Σ (-1)^{n+1}/n
        let s = sum_series(1, |n| if n % 2 == 1 { 1.0 / n as f64 } else { -1.0 / n as f64 }, &SeriesControl::default())
            .unwrap();
        assert!((s.value - std::f64::consts::LN_2).abs() < 1e-10, "{s:?}");
    }

    #[test]
    fn peaked_terms_are_not_cut_early() {
        // Poisson(60) probabilities start near e^{-60}
        let lam: f64 = 60.0;
        let s = sum_series(
            0,
            |k| (-lam + k as f64 * lam.ln() - statrs::function::gamma::ln_gamma(k as f64 + 1.0)).exp(),
            &SeriesControl::default(),
        )
        .unwrap();
        assert!((s.value - 1.0).abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn divergent_series_is_flagged() {
        let r = sum_series(0, |n| n as f64, &SeriesControl::default());
        assert!(matches!(r, Err(Error::SeriesNonConvergence { .. })));
    }

    #[test]
    fn control_validation() {
        let bad = SeriesControl { max_terms_per_index: 5, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
