//! Density, distribution, hazard and quantile evaluation, followed by a
//! seeded sample whose empirical mean is compared with the exact one.

use pngkme::distribution::{Lifetime, Params, Pngkme, RngStream};
use pngkme::properties;

fn main() -> pngkme::Result<()> {
    let params = Params::new(2.0, 1.5, 3.0)?;
    let dist = Pngkme::new(params);

    println!("{:>6} {:>12} {:>12} {:>12}", "x", "pdf", "cdf", "hazard");
    for x in [0.1, 0.5, 1.0, 2.0, 4.0] {
        println!("{x:>6.2} {:>12.6} {:>12.6} {:>12.6}", dist.pdf(x), dist.cdf(x), dist.hazard(x)?);
    }

    let (q1, median, q3) = dist.quartiles();
    println!("quartiles: {q1:.6}, {median:.6}, {q3:.6}");

    let mut rng = RngStream::new(2024);
    let draws = dist.sample(&mut rng, 10_000);
    let empirical = draws.iter().sum::<f64>() / draws.len() as f64;
    println!("sample mean {empirical:.5} vs exact mean {:.5}", properties::mean(&params)?);
    Ok(())
}
