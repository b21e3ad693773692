//! Monte Carlo study of the bias and mean squared error of the maximum
//! likelihood estimators of the PNGKME parameters.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{Family, Lifetime, ModelSpec, Params, Pngkme, RngStream};
use crate::inference::{fit, FitOptions, Sample, DEFAULT_OMEGA, DEFAULT_RESTARTS};
use crate::{Error, Result};

/// Replications per cell in the full design.
pub const FULL_REPLICATIONS: usize = 1000;
/// Replications per cell in the desk-scale design.
pub const DESK_REPLICATIONS: usize = 200;
/// A cell is unreliable when more than this share of its fits fail.
pub const MAX_FAILURE_RATE: f64 = 0.05;
/// Share of largest squared errors dropped in the trimmed diagnostics.
pub const TRIM_FRACTION: f64 = 0.05;
/// Starts used when a replication is refitted.
pub const REFIT_RESTARTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDesign {
    pub truths: Vec<Params>,
    pub sizes: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub omega: f64,
    pub restarts: usize,
}

impl SimDesign {
    /// Four parameter sets crossed with `n ∈ {50, 200, 500, 1000}`.
    pub fn table1(replications: usize, seed: u64) -> Self {
        let truths = [(2.5, 1.5, 0.5), (5.0, 2.5, 0.5), (3.5, 5.5, 1.5), (1.0, 1.5, 2.0)]
            .iter()
            .map(|&(a, b, l)| Params { alpha: a, beta: b, lambda: l })
            .collect();
        SimDesign {
            truths,
            sizes: vec![50, 200, 500, 1000],
            replications,
            seed,
            omega: DEFAULT_OMEGA,
            restarts: DEFAULT_RESTARTS,
        }
    }

    pub fn desk(seed: u64) -> Self {
        Self::table1(DESK_REPLICATIONS, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if self.sizes.iter().any(|&n| n < 2) {
            return Err(Error::Domain("sample sizes must be at least 2".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("at least one optimizer start is required".into()));
        }
        self.truths.iter().try_for_each(Params::validate)
    }
}

impl Default for SimDesign {
    fn default() -> Self {
        Self::table1(FULL_REPLICATIONS, crate::inference::DEFAULT_SEED)
    }
}

/// Robust companions to the headline bias and MSE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrimmedDiagnostics {
    /// Median of `θ̂ − θ`.
    pub median_error: [f64; 3],
    /// MSE after dropping the largest squared errors.
    pub trimmed_mse: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub truth: Params,
    pub n: usize,
    /// Replications with a converged fit; bias and MSE are averages over these.
    pub used: usize,
    pub bias: [f64; 3],
    pub mse: [f64; 3],
    /// Replications refitted after a failed first attempt.
    pub refits: usize,
    /// Replications still failing after the refit, typically with `λ̂` on
    /// the search box. They are counted here and left out of bias and MSE.
    pub failures: usize,
    pub unreliable: bool,
    pub trimmed: TrimmedDiagnostics,
    pub wall_clock_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub design: SimDesign,
    pub cells: Vec<CellReport>,
}

impl SimReport {
    pub fn cell(&self, truth: &Params, n: usize) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.truth == *truth && c.n == n)
    }
}

struct Replicate {
    estimate: Option<[f64; 3]>,
    refit: bool,
    failed: bool,
}

fn replicate(design: &SimDesign, truth: &Params, n: usize, stream: u64) -> Replicate {
    let mut rng = RngStream::with_stream(design.seed, stream);
    let Ok(sample) = Sample::new(Pngkme::new(*truth).sample(&mut rng, n)) else {
        return Replicate { estimate: None, refit: false, failed: true };
    };
    let spec = ModelSpec::new(Family::Pngkme);
    let opts = FitOptions { omega: design.omega, restarts: design.restarts, seed: rng.next_u64(), extra_starts: Vec::new() };
    let first = fit(&spec, &sample, &opts);
    if let Ok(f) = &first {
        if f.converged {
            return Replicate { estimate: Some(f.estimates.as_array()), refit: false, failed: false };
        }
    }
    let mut retry = FitOptions { restarts: REFIT_RESTARTS.max(design.restarts), seed: rng.next_u64(), ..opts };
    retry.extra_starts.extend(first.as_ref().ok().map(|f| f.estimates));
    let second = fit(&spec, &sample, &retry);
    let best = match (first, second) {
        (Ok(a), Ok(b)) => Some(if b.loglik >= a.loglik { b } else { a }),
        (Ok(a), Err(_)) => Some(a),
        (Err(_), Ok(b)) => Some(b),
        (Err(_), Err(_)) => None,
    };
    Replicate {
        failed: !best.as_ref().is_some_and(|b| b.converged),
        estimate: best.map(|b| b.estimates.as_array()),
        refit: true,
    }
}

fn run_cell(design: &SimDesign, index: usize, truth: &Params, n: usize) -> CellReport {
    let start = Instant::now();
    let base = (index as u64) << 32;
    let reps: Vec<Replicate> =
        (0..design.replications).into_par_iter().map(|r| replicate(design, truth, n, base + r as u64)).collect();
    let t = truth.as_array();
    let errors: Vec<[f64; 3]> = reps
        .iter()
        .filter(|r| !r.failed)
        .filter_map(|r| r.estimate)
        .map(|e| [e[0] - t[0], e[1] - t[1], e[2] - t[2]])
        .collect();
    let used = errors.len();
    let mut bias = [f64::NAN; 3];
    let mut mse = [f64::NAN; 3];
    let mut median_error = [f64::NAN; 3];
    let mut trimmed_mse = [f64::NAN; 3];
    if used > 0 {
        for k in 0..3 {
            let col: Vec<f64> = errors.iter().map(|e| e[k]).collect();
            bias[k] = col.iter().sum::<f64>() / used as f64;
            mse[k] = col.iter().map(|e| e * e).sum::<f64>() / used as f64;
            let mut sorted = col.clone();
            sorted.sort_by(f64::total_cmp);
            median_error[k] = if used % 2 == 1 {
                sorted[used / 2]
            } else {
                0.5 * (sorted[used / 2 - 1] + sorted[used / 2])
            };
            let mut sq: Vec<f64> = col.iter().map(|e| e * e).collect();
            sq.sort_by(f64::total_cmp);
            let keep = used - ((used as f64 * TRIM_FRACTION).floor() as usize).min(used - 1);
            trimmed_mse[k] = sq[..keep].iter().sum::<f64>() / keep as f64;
        }
    }
    let failures = reps.iter().filter(|r| r.failed).count();
    CellReport {
        truth: *truth,
        n,
        used,
        bias,
        mse,
        refits: reps.iter().filter(|r| r.refit).count(),
        failures,
        unreliable: failures as f64 > MAX_FAILURE_RATE * design.replications as f64,
        trimmed: TrimmedDiagnostics { median_error, trimmed_mse },
        wall_clock_secs: start.elapsed().as_secs_f64(),
    }
}

/// Runs every (truth, n) cell of `design`.
pub fn run_study(design: &SimDesign) -> Result<SimReport> {
    run_study_with_progress(design, |_| {})
}

/// As [`run_study`], calling `progress` after each finished cell.
pub fn run_study_with_progress<P: FnMut(&CellReport)>(design: &SimDesign, mut progress: P) -> Result<SimReport> {
    design.validate()?;
    let mut cells = Vec::with_capacity(design.truths.len() * design.sizes.len());
    for (i, truth) in design.truths.iter().enumerate() {
        for (j, &n) in design.sizes.iter().enumerate() {
            let cell = run_cell(design, i * design.sizes.len() + j, truth, n);
            progress(&cell);
            cells.push(cell);
        }
    }
    Ok(SimReport { design: design.clone(), cells })
}

/// One line of the exported bias/MSE table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub bias_alpha: f64,
    pub bias_beta: f64,
    pub bias_lambda: f64,
    pub mse_alpha: f64,
    pub mse_beta: f64,
    pub mse_lambda: f64,
}

impl From<&CellReport> for TableRow {
    fn from(c: &CellReport) -> Self {
        TableRow {
            n: c.n,
            alpha: c.truth.alpha,
            beta: c.truth.beta,
            lambda: c.truth.lambda,
            bias_alpha: c.bias[0],
            bias_beta: c.bias[1],
            bias_lambda: c.bias[2],
            mse_alpha: c.mse[0],
            mse_beta: c.mse[1],
            mse_lambda: c.mse[2],
        }
    }
}

pub const TABLE_HEADER: [&str; 10] =
    ["n", "alpha", "beta", "lambda", "bias_alpha", "bias_beta", "bias_lambda", "mse_alpha", "mse_beta", "mse_lambda"];

/// Bias/MSE table as CSV, one row per cell in design order.
pub fn export_table(report: &SimReport) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(TABLE_HEADER).expect("in-memory write");
    for c in &report.cells {
        w.serialize(TableRow::from(c)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(format!("simulation table: {e}"))))
        .collect()
}
