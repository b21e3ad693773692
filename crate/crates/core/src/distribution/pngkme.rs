use super::{check_probability, Lifetime, Params};
use crate::Result;

/// Distance from one below which `lambda` is treated as exactly one.
pub const LAMBDA_SWITCH: f64 = 1e-6;

/// `ln(1 − e^{−w})` for `w ≥ 0`, given `ln w`.
pub(crate) fn ln_1m_exp_neg(ln_w: f64) -> f64 {
    if ln_w < -20.0 {
        ln_w - 0.5 * ln_w.exp()
    } else {
        let w = ln_w.exp();
        if w > 40.0 {
            -(-w).exp()
        } else {
            (-(-w).exp_m1()).ln()
        }
    }
}

/// The PNGKME distribution.
///
/// With `L = ln λ`, `g = 1 − e^{−βx}` and `r(g) = (1 − λ^{−g}) / (1 − λ^{−1})`,
/// the CDF is `r^α`. Every quantity is evaluated through `expm1`/`ln1p`
/// forms of `r` and `1 − r`, which stay finite and accurate for either side
/// of `λ = 1` and reduce to the exponentiated exponential law at `L = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pngkme {
    p: Params,
    l: f64,
}

impl Pngkme {
    pub fn new(p: Params) -> Self {
        let l = if (p.lambda - 1.0).abs() < LAMBDA_SWITCH { 0.0 } else { p.lambda.ln() };
        Pngkme { p, l }
    }

    pub fn params(&self) -> Params {
        self.p
    }

    /// `ln λ`, or exactly zero inside the switch band around `λ = 1`.
    pub fn log_lambda(&self) -> f64 {
        self.l
    }

    /// `ln(L / (1 − e^{−L}))`, the normalizing term of the density.
    pub(crate) fn phi(l: f64) -> f64 {
        if l == 0.0 {
            0.0
        } else if l > 0.0 {
            l.ln() - ln_1m_exp_neg(l.ln())
        } else {
            let m = -l;
            m.ln() - m - ln_1m_exp_neg(m.ln())
        }
    }

    /// `(ln r, ln(1 − r))` at `x > 0`.
    pub(crate) fn ln_r_q(&self, x: f64) -> (f64, f64) {
        let bx = self.p.beta * x;
        let ln_g = ln_1m_exp_neg(bx.ln());
        let l = self.l;
        let (ln_r, ln_q) = if l == 0.0 {
            (ln_g, -bx)
        } else if l > 0.0 {
            let ln_l = l.ln();
            let den = ln_1m_exp_neg(ln_l);
            let g = -(-bx).exp_m1();
            (ln_1m_exp_neg(ln_g + ln_l) - den, -g * l + ln_1m_exp_neg(ln_l - bx) - den)
        } else {
            let ln_m = (-l).ln();
            let den = ln_1m_exp_neg(ln_m);
            let u = (-bx).exp();
            (u * l + ln_1m_exp_neg(ln_g + ln_m) - den, ln_1m_exp_neg(ln_m - bx) - den)
        };
        let ln_r = if ln_q < -std::f64::consts::LN_2 { (-ln_q.exp()).ln_1p() } else { ln_r.min(0.0) };
        (ln_r, ln_q.min(0.0))
    }

    pub fn ln_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::NEG_INFINITY
        } else if x.is_infinite() {
            0.0
        } else {
            self.p.alpha * self.ln_r_q(x).0
        }
    }
}

impl Lifetime for Pngkme {
    fn ln_pdf(&self, x: f64) -> f64 {
        let Params { alpha, beta, .. } = self.p;
        if !(x >= 0.0) || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let base = alpha.ln() + beta.ln() + Self::phi(self.l);
        if x == 0.0 {
            return if alpha == 1.0 {
                base
            } else if alpha > 1.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        let bx = beta * x;
        let g = -(-bx).exp_m1();
        let mut v = base - bx - g * self.l;
        if alpha != 1.0 {
            v += (alpha - 1.0) * self.ln_r_q(x).0;
        }
        v
    }

    fn cdf(&self, x: f64) -> f64 {
        self.ln_cdf(x).exp()
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else if x.is_infinite() {
            0.0
        } else {
            -(self.p.alpha * self.ln_r_q(x).0).exp_m1()
        }
    }

    fn ln_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let (ln_r, ln_q) = self.ln_r_q(x);
        if ln_q < -600.0 {
            // S = 1 − (1 − q)^α ≈ α q
            self.p.alpha.ln() + ln_q
        } else {
            (-(self.p.alpha * ln_r).exp_m1()).ln()
        }
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        check_probability(u)?;
        if u == 0.0 {
            return Ok(0.0);
        }
        if u == 1.0 {
            return Ok(f64::INFINITY);
        }
        let beta = self.p.beta;
        let ln_r = u.ln() / self.p.alpha;
        let r = ln_r.exp();
        let s = -ln_r.exp_m1();
        let l = self.l;
        let (g, one_minus_g) = if l == 0.0 {
            (r, s)
        } else {
            let g = -(r * (-l).exp_m1()).ln_1p() / l;
            (g, if g < 0.5 { f64::NAN } else { (s * l.exp_m1()).ln_1p() / l })
        };
        Ok(if g < 0.5 { -(-g).ln_1p() / beta } else { -one_minus_g.ln() / beta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::RngStream;
    use crate::numerics::integrate_breaks;
    use proptest::prelude::*;

    fn d(a: f64, b: f64, l: f64) -> Pngkme {
        Pngkme::new(Params::new(a, b, l).unwrap())
    }

    /// Direct transcription of the closed forms, both signs of `λ − 1`.
    fn naive_cdf(a: f64, b: f64, l: f64, x: f64) -> f64 {
        let g = 1.0 - (-b * x).exp();
        if l == 1.0 {
            g.powf(a)
        } else if l > 1.0 {
            (l / (l - 1.0)).powf(a) * (1.0 - l.powf(-g)).powf(a)
        } else {
            (l / (1.0 - l)).powf(a) * (l.powf(-g) - 1.0).powf(a)
        }
    }

    fn naive_pdf(a: f64, b: f64, l: f64, x: f64) -> f64 {
        let e = (-b * x).exp();
        let g = 1.0 - e;
        if l == 1.0 {
            a * b * e * g.powf(a - 1.0)
        } else {
            let c = a * b * (l / (l - 1.0).abs()).powf(a) * l.ln().abs();
            c * e * l.powf(-g) * (1.0 - l.powf(-g)).abs().powf(a - 1.0)
        }
    }

    fn mass(dist: &Pngkme) -> f64 {
        let m = dist.median();
        integrate_breaks(|x| dist.pdf(x), &[0.0, m, f64::INFINITY], 1e-12).value
    }

    #[test]
    fn cdf_examples() {
        assert!((d(1.0, 1.0, 1.0).cdf(2f64.ln()) - 0.5).abs() < 1e-15);
        assert_eq!(d(2.0, 1.0, 2.0).cdf(0.0), 0.0);
        let oracle = 4.0 * (1.0 - 2f64.powf(-(1.0 - (-1.0f64).exp()))).powi(2);
        assert!((d(2.0, 1.0, 2.0).cdf(1.0) - oracle).abs() < 1e-14);
        assert!((oracle - 0.5029).abs() < 1e-3);
    }

    #[test]
    fn matches_direct_formulas() {
        for (a, b, l) in [(2.0, 1.0, 2.0), (0.5, 2.0, 0.3), (1.6651, 0.0525, 41.186), (3.0, 0.7, 1.0), (0.7, 1.3, 5.0)] {
            let dist = d(a, b, l);
            for x in [0.01, 0.3, 1.0, 2.5, 7.0] {
                let (c, p) = (naive_cdf(a, b, l, x), naive_pdf(a, b, l, x));
                assert!((dist.cdf(x) - c).abs() <= 1e-12 * c.max(1e-3), "cdf {a} {b} {l} {x}");
                assert!((dist.pdf(x) - p).abs() <= 1e-11 * p, "pdf {a} {b} {l} {x}: {} vs {p}", dist.pdf(x));
            }
        }
    }

    #[test]
    fn pdf_examples() {
        assert!((d(1.0, 2.0, 1.0).pdf(0.0) - 2.0).abs() < 1e-15);
        assert_eq!(d(2.0, 1.0, 1.0).pdf(0.0), 0.0);
        assert!((mass(&d(2.0, 1.0, 2.0)) - 1.0).abs() < 1e-10);
        assert_eq!(d(2.0, 1.0, 2.0).pdf(-1.0), 0.0);
    }

    #[test]
    fn survival_and_hazard() {
        let e = d(1.0, 0.7, 1.0);
        for x in [0.0, 0.5, 3.0, 40.0, 900.0] {
            assert!((e.hazard(x).unwrap() - 0.7).abs() < 1e-12);
        }
        let p = d(2.0, 1.0, 2.0);
        assert!((p.survival(1.0) - (1.0 - p.cdf(1.0))).abs() < 1e-15);
        let h = p.hazard(1.0).unwrap();
        assert!((h - p.pdf(1.0) / p.survival(1.0)).abs() <= 1e-12 * h);
        // far tail where 1 − F rounds to zero in double precision
        assert!(p.cdf(40.0) == 1.0 && p.survival(40.0) > 0.0);
        let h = p.hazard(1e4).unwrap();
        assert!(h.is_finite() && h > 0.0);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(d(2.0, 1.0, 2.0).quantile(0.0).unwrap(), 0.0);
        assert!((d(1.0, 1.0, 1.0).quantile(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(d(1.0, 1.0, 1.0).quantile(1.5).is_err());
        assert_eq!(d(1.0, 1.0, 1.0).quantile(1.0).unwrap(), f64::INFINITY);
        let p = d(2.0, 1.0, 2.0);
        for i in 1..=9 {
            let u = i as f64 / 10.0;
            assert!((p.cdf(p.quantile(u).unwrap()) - u).abs() < 1e-10);
        }
        assert!((p.cdf(p.median()) - 0.5).abs() < 1e-10);
        assert!((d(1.0, 1.0, 1.0).median() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sampling() {
        let p = d(2.5, 1.5, 0.5);
        assert!(p.sample(&mut RngStream::new(1), 0).is_empty());
        assert_eq!(p.sample(&mut RngStream::new(9), 50), p.sample(&mut RngStream::new(9), 50));
        let n = 100_000;
        let mut xs = p.sample(&mut RngStream::new(20240611), n);
        xs.sort_by(f64::total_cmp);
        let dn = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = p.cdf(x);
                (f - i as f64 / n as f64).max((i + 1) as f64 / n as f64 - f)
            })
            .fold(0.0, f64::max);
        assert!(dn < 1.95 / (n as f64).sqrt(), "D = {dn}");
    }

    #[test]
    fn upper_tail_reaches_one() {
        for p in [d(2.0, 1.0, 2.0), d(0.3, 0.05, 0.2), d(40.0, 7.0, 45.0)] {
            let u = 1.0 - 1e-12;
            let x = p.quantile(u).unwrap();
            assert!(x.is_finite());
            assert!((p.cdf(x) - 1.0).abs() < 1e-11);
            assert!((p.survival(x) / (1.0 - u) - 1.0).abs() < 1e-6, "{}", p.survival(x));
        }
    }

    fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        (lo.ln()..hi.ln()).prop_map(f64::exp)
    }

    fn triple() -> impl Strategy<Value = Pngkme> {
        (log_uniform(0.1, 50.0), log_uniform(0.01, 10.0), log_uniform(0.1, 50.0)).prop_map(|(a, b, l)| d(a, b, l))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn density_integrates_to_one(p in triple()) {
            let m = mass(&p);
            prop_assert!((m - 1.0).abs() < 1e-8, "{:?}: {}", p, m);
        }

        #[test]
        fn quantile_inverts_cdf(p in triple(), z in 0.0..1.0f64) {
            let x = p.quantile(0.001 + 0.998 * z).unwrap();
            let back = p.quantile(p.cdf(x)).unwrap();
            prop_assert!((back - x).abs() <= 1e-8 * (1.0 + x), "{} vs {}", back, x);
        }

        #[test]
        fn cdf_is_monotone(p in triple()) {
            let hi = p.quantile(0.999).unwrap();
            let mut last = 0.0;
            for i in 0..=200 {
                let f = p.cdf(hi * i as f64 / 200.0);
                prop_assert!(f >= last);
                last = f;
            }
        }

        #[test]
        fn hazard_times_survival_is_density(p in triple(), z in 0.0..1.0f64) {
            let x = p.quantile(0.001 + 0.998 * z).unwrap();
            let (h, s, f) = (p.hazard(x).unwrap(), p.survival(x), p.pdf(x));
            prop_assert!((h * s - f).abs() <= 1e-12 * f);
        }

        #[test]
        fn continuous_across_lambda_one(a in 0.2..10.0f64, b in 0.1..5.0f64) {
            let at_one = d(a, b, 1.0);
            for lam in [1.0 - 1e-7, 1.0 + 1e-7, 1.0 - 2e-6, 1.0 + 2e-6] {
                let near = d(a, b, lam);
                for i in 1..=40 {
                    let x = i as f64 * 0.1 / b;
                    prop_assert!((near.cdf(x) - at_one.cdf(x)).abs() <= 1e-6);
                }
            }
        }
    }
}
