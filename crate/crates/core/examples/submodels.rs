//! The named submodels are the PNGKME law with alpha and/or lambda pinned.
//! This prints what each one fixes and its median at a common rate.

use pngkme::distribution::{Family, Lifetime, ModelSpec, Params};

fn main() -> pngkme::Result<()> {
    let families = [
        Family::Pngkme,
        Family::Ee,
        Family::Duse,
        Family::Pduse,
        Family::Apte,
        Family::Gkme,
        Family::Pgkme,
        Family::Ngkme,
        Family::Pete,
        Family::Ppete,
        Family::Exponential,
    ];
    let base = Params::new(1.8, 0.7, 2.5)?;
    println!("{:<12} {:>8} {:>10} {:>10}", "model", "alpha", "lambda", "median");
    for family in families {
        let spec = ModelSpec::new(family);
        let p = spec.complete(base);
        let model = spec.model(base)?;
        println!("{:<12} {:>8.4} {:>10.6} {:>10.5}", family.name(), p.alpha, p.lambda, model.median());
    }
    Ok(())
}
