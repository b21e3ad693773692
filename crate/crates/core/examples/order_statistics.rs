//! Distribution of the k-th order statistic, directly and through its
//! expansion as a mixture of exponentiated laws.

use pngkme::distribution::{Lifetime, Params, Pngkme};
use pngkme::properties::{order_stat_cdf, order_stat_cdf_expansion, order_stat_pdf};

fn main() -> pngkme::Result<()> {
    let p = Params::new(1.2, 0.5, 4.0)?;
    let median = Pngkme::new(p).median();
    let n = 5;
    println!("sample size {n}, evaluated at the population median {median:.5}");
    for k in 1..=n {
        println!(
            "k={k}: cdf {:.10} (expansion {:.10}), pdf {:.8}",
            order_stat_cdf(&p, n, k, median)?,
            order_stat_cdf_expansion(&p, n, k, median)?,
            order_stat_pdf(&p, n, k, median)?
        );
    }
    Ok(())
}
