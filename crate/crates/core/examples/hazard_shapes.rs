//! Hazard curves for a few parameter choices, written as CSV for plotting.
//! Small alpha gives a decreasing hazard and large alpha an increasing one.

use pngkme::distribution::{Lifetime, Params, Pngkme};

fn main() -> pngkme::Result<()> {
    let shapes = [(0.5, 1.0, 2.0), (1.0, 1.0, 1.0), (3.0, 1.0, 0.2), (3.0, 1.0, 20.0)];
    let models: Vec<Pngkme> =
        shapes.iter().map(|&(a, b, l)| Params::new(a, b, l).map(Pngkme::new)).collect::<pngkme::Result<_>>()?;
    let header: Vec<String> = shapes.iter().map(|(a, b, l)| format!("h_{a}_{b}_{l}")).collect();
    println!("x,{}", header.join(","));
    for i in 1..=40 {
        let x = i as f64 * 0.1;
        let values: Vec<String> = models.iter().map(|m| m.hazard(x).map(|h| format!("{h:.6}"))).collect::<pngkme::Result<_>>()?;
        println!("{x:.1},{}", values.join(","));
    }
    Ok(())
}
