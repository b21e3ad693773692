//! Fits the fifteen-model battery to the bundled remission-time data and
//! prints the AIC ranking with goodness-of-fit statistics.

use pngkme::data::bladder128;
use pngkme::gof::{compare_models, default_battery, CompareOptions};

fn main() -> pngkme::Result<()> {
    let sample = bladder128()?;
    let table = compare_models(&sample, &default_battery(), &CompareOptions::default())?;
    println!(
        "{:<12} {:>9} {:>9} {:>9} {:>10} {:>10} {:>8} {:>7} {:>8} {:>7} {:>8} {:>7}",
        "model", "alpha", "beta", "lambda", "-2lnL", "AIC", "K-S", "p", "CvM", "p", "A-D", "p"
    );
    for row in &table.rows {
        match (&row.fit, &row.gof) {
            (Some(f), Some(g)) => println!(
                "{:<12} {:>9.5} {:>9.5} {:>9.4} {:>10.4} {:>10.4} {:>8.4} {:>7.4} {:>8.4} {:>7.4} {:>8.4} {:>7.4}{}",
                row.model,
                f.estimates.alpha,
                f.estimates.beta,
                f.estimates.lambda,
                f.neg2loglik,
                f.aic,
                g.ks,
                g.ks_p,
                g.cvm,
                g.cvm_p,
                g.ad,
                g.ad_p,
                if f.converged { "" } else { "  (not converged)" }
            ),
            _ => println!("{:<12} failed: {}", row.model, row.error.as_deref().unwrap_or("unknown")),
        }
    }
    Ok(())
}
