//! Maximum likelihood fit of the full model and of a submodel with lambda
//! held fixed, on the bundled bladder-cancer remission times.

use pngkme::data::bladder128;
use pngkme::distribution::{Family, ModelSpec};
use pngkme::inference::{fit, FitOptions};

fn main() -> pngkme::Result<()> {
    let sample = bladder128()?;
    let options = FitOptions::default();
    let specs = [
        ModelSpec::new(Family::Pngkme),
        ModelSpec { fixed_lambda: Some(10.0), ..ModelSpec::new(Family::Pngkme) },
    ];
    for spec in specs {
        let f = fit(&spec, &sample, &options)?;
        println!("{:?}, lambda fixed at {:?}", spec.family, spec.fixed_lambda);
        println!(
            "  estimates alpha={:.5} beta={:.6} lambda={:.4}",
            f.estimates.alpha, f.estimates.beta, f.estimates.lambda
        );
        println!("  -2lnL {:.4}  AIC {:.4}  converged {}", f.neg2loglik, f.aic, f.converged);
        for ci in f.ci.iter().flatten() {
            println!("  {:<7} 95% interval ({:.5}, {:.5})", ci.parameter, ci.lower, ci.upper);
        }
    }
    Ok(())
}
