//! K-S, Cramér–von Mises and Anderson–Darling statistics for the fitted
//! PNGKME model, with asymptotic and parametric-bootstrap p-values.

use pngkme::data::bladder128;
use pngkme::distribution::{Family, ModelSpec};
use pngkme::gof::{gof_report, PvalueMethod};
use pngkme::inference::{fit, FitOptions};

fn main() -> pngkme::Result<()> {
    let sample = bladder128()?;
    let spec = ModelSpec::new(Family::Pngkme);
    let options = FitOptions { restarts: 4, ..FitOptions::default() };
    let fitted = fit(&spec, &sample, &options)?;
    for method in [PvalueMethod::Asymptotic, PvalueMethod::Bootstrap { replicates: 99 }] {
        let g = gof_report(&spec, &fitted.estimates, &sample, method, &options)?;
        println!("{method:?}");
        println!("  K-S {:.5} (p {:.4})", g.ks, g.ks_p);
        println!("  CvM {:.5} (p {:.4})", g.cvm, g.cvm_p);
        println!("  A-D {:.5} (p {:.4})", g.ad, g.ad_p);
        if g.bootstrap_failures > 0 {
            println!("  {} bootstrap refits did not converge", g.bootstrap_failures);
        }
    }
    Ok(())
}
