//! Moments, generating functions, mean deviations, inequality curves and
//! entropies, each computed by the series form and by direct integration.

use pngkme::distribution::Params;
use pngkme::properties::{self, Method, MomentRequest};

fn main() -> pngkme::Result<()> {
    let p = Params::new(2.0, 1.0, 0.5)?;
    println!("{:<28} {:>16} {:>16}", "quantity", "series", "quadrature");
    let both = |name: &str, f: &dyn Fn(Method) -> pngkme::Result<f64>| -> pngkme::Result<()> {
        println!("{name:<28} {:>16.10} {:>16.10}", f(Method::Series)?, f(Method::Quadrature)?);
        Ok(())
    };
    for r in 1..=4 {
        both(&format!("E[X^{r}]"), &|m| properties::raw_moment(&MomentRequest { params: p, r, method: m }))?;
    }
    both("M(0.4)", &|m| properties::mgf(&p, 0.4, m))?;
    both("mean deviation (mean)", &|m| properties::mean_deviation_about_mean(&p, m))?;
    both("mean deviation (median)", &|m| properties::mean_deviation_about_median(&p, m))?;
    both("Lorenz L(0.5)", &|m| properties::lorenz(&p, 0.5, m))?;
    both("Bonferroni B(0.5)", &|m| properties::bonferroni(&p, 0.5, m))?;
    both("Renyi entropy s=0.5", &|m| properties::renyi_entropy(&p, 0.5, m))?;
    both("Renyi entropy s=2", &|m| properties::renyi_entropy(&p, 2.0, m))?;

    println!("variance {:.10}", properties::variance(&p)?);
    println!("Shannon entropy {:.10}", properties::shannon_entropy(&p)?);
    for t in [0.0, 1.0, 3.0] {
        println!("mean residual life at {t}: {:.10}", properties::mean_residual_life(&p, t)?);
    }
    let (re, im) = properties::cf(&p, 1.5, Method::Series)?;
    println!("characteristic function at 1.5: {re:.10} + {im:.10}i");
    Ok(())
}
