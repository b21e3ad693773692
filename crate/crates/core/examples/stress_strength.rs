//! Stress-strength reliability R = P(stress < strength) for the four
//! combinations of transformed (lambda != 1) and exponentiated (lambda = 1)
//! components.

use pngkme::distribution::{Lifetime, Params, Pngkme, RngStream};
use pngkme::properties::{self, Method, ReliabilityPair};

fn main() -> pngkme::Result<()> {
    let strength = Params::new(2.5, 0.8, 3.0)?;
    let stress = Params::new(1.5, 1.2, 0.4)?;
    let pairs = [
        ReliabilityPair::new(strength, stress),
        ReliabilityPair::new(Params { lambda: 1.0, ..strength }, stress),
        ReliabilityPair::new(strength, Params { lambda: 1.0, ..stress }),
        ReliabilityPair::new(Params { lambda: 1.0, ..strength }, Params { lambda: 1.0, ..stress }),
    ];
    let mut rng = RngStream::new(99);
    for pair in pairs {
        let series = properties::reliability(&pair, Method::Series)?;
        let quad = properties::reliability(&pair, Method::Quadrature)?;
        let (x1, x2) = (Pngkme::new(pair.strength), Pngkme::new(pair.stress));
        let n = 200_000;
        let wins = (0..n).filter(|_| x2.sample(&mut rng, 1)[0] < x1.sample(&mut rng, 1)[0]).count();
        println!(
            "case {}: series {series:.8}  quadrature {quad:.8}  Monte Carlo {:.4}",
            pair.case().number(),
            wins as f64 / n as f64
        );
    }
    Ok(())
}
