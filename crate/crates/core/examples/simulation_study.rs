//! Bias and MSE of the maximum likelihood estimators over the four-by-four
//! simulation grid. Pass the number of replications per cell as the first
//! argument (default 200).

use pngkme::simstudy::{export_table, run_study_with_progress, SimDesign};

fn main() -> pngkme::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let design = SimDesign::table1(reps, 42);
    let report = run_study_with_progress(&design, |c| {
        eprintln!(
            "n = {:>4} truth = ({}, {}, {}): {:.1} s, {} refits, {} failures",
            c.n, c.truth.alpha, c.truth.beta, c.truth.lambda, c.wall_clock_secs, c.refits, c.failures
        )
    })?;
    print!("{}", export_table(&report));
    Ok(())
}
