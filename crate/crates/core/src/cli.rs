//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 on domain or convergence failures and 2 on
//! usage errors. Data goes to `stdout`, diagnostics to `stderr`.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::data::DatasetRef;
use crate::distribution::{Lifetime, Model, ModelSpec, Params, RngStream};
use crate::gof::{compare_models, default_battery, gof_report, CompareOptions, ComparisonTable, GofReport, PvalueMethod};
use crate::inference::{fit, FitOptions, FitResult, Sample, DEFAULT_OMEGA, DEFAULT_RESTARTS, DEFAULT_SEED};
use crate::simstudy::{export_table, run_study_with_progress, SimDesign, SimReport, TableRow, FULL_REPLICATIONS};
use crate::Error;

/// Version of the JSON documents written by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "pngkme", version, about = "PNGKME lifetime distribution toolkit")]
pub struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,
    /// Seed for random starts, sampling and simulation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Confidence intervals are computed at level 1 - omega.
    #[arg(long, global = true, default_value_t = DEFAULT_OMEGA)]
    pub omega: f64,
    /// Optimizer starts per fit.
    #[arg(long, global = true, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Treat non-converged fits and unreliable simulation cells as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Evaluate pdf, cdf, survival, hazard or quantile at given points.
    Eval(EvalArgs),
    /// Draw a random sample.
    Sample(SampleArgs),
    /// Maximum likelihood fit of one model.
    Fit(FitArgs),
    /// Fit several models and rank them by AIC.
    Compare(CompareArgs),
    /// Goodness-of-fit statistics for one model.
    Gof(GofArgs),
    /// Monte Carlo bias/MSE study.
    Simulate(SimulateArgs),
    /// Grid of pdf, cdf and hazard values for plotting.
    Curves(CurvesArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    /// Model name, e.g. pngkme, ee, duse, ew, weibull, gamma.
    #[arg(long, default_value = "pngkme")]
    pub model: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Function {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    Quantile,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    /// Points for pdf, cdf, survival and hazard.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    /// Probabilities for the quantile function.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    pub model: String,
    /// `bladder128` or a path to a text file of observations.
    #[arg(long, default_value = "bladder128")]
    pub data: String,
    /// Hold alpha fixed at this value.
    #[arg(long)]
    pub fix_alpha: Option<f64>,
    /// Hold lambda fixed at this value.
    #[arg(long)]
    pub fix_lambda: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long, default_value = "bladder128")]
    pub data: String,
    /// Comma-separated model names; defaults to the full fifteen-model battery.
    #[arg(long, value_delimiter = ',')]
    pub models: Vec<String>,
    /// Parametric bootstrap replicates for the p-values (asymptotic if absent).
    #[arg(long)]
    pub bootstrap: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct GofArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value = "bladder128")]
    pub data: String,
    /// Parametric bootstrap replicates for the p-values (asymptotic if absent).
    #[arg(long)]
    pub bootstrap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Table1,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "table1")]
    pub preset: Preset,
    /// Replications per cell.
    #[arg(long, default_value_t = crate::simstudy::DESK_REPLICATIONS)]
    pub reps: usize,
    /// Run the full design with 1000 replications per cell.
    #[arg(long, conflicts_with = "reps")]
    pub full: bool,
    /// Override the sample sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long, default_value_t = 5.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Domain(_) => "domain",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// What a subcommand produced: the data to print and an optional failure
/// that still leaves partial results worth printing.
struct Report {
    json: serde_json::Value,
    csv: Vec<Vec<String>>,
    table: Option<Vec<Vec<String>>>,
    failure: Option<Failure>,
}

impl Report {
    fn new(json: serde_json::Value, csv: Vec<Vec<String>>) -> Self {
        Report { json, csv, table: None, failure: None }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let format = cli.output.unwrap_or(match cli.command {
        Command::Fit(_) => OutputFormat::Json,
        Command::Eval(_) | Command::Compare(_) | Command::Gof(_) => OutputFormat::Table,
        Command::Sample(_) | Command::Simulate(_) | Command::Curves(_) => OutputFormat::Csv,
    });
    let outcome = execute(&cli, stderr).and_then(|report| emit(&cli, format, report, stdout));
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Sample(_) => "sample",
        Command::Fit(_) => "fit",
        Command::Compare(_) => "compare",
        Command::Gof(_) => "gof",
        Command::Simulate(_) => "simulate",
        Command::Curves(_) => "curves",
    }
}

fn emit(cli: &Cli, format: OutputFormat, report: Report, out: &mut dyn Write) -> Outcome {
    let io = |e: std::io::Error| Failure::Domain(format!("writing output: {e}"));
    match format {
        OutputFormat::Json => {
            let mut doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command_name(&cli.command),
                "config": cli,
                "result": report.json,
            });
            doc["config"]["output"] = json!(format);
            if let Some(f) = &report.failure {
                doc["error"] = json!({ "kind": f.kind(), "message": f.message() });
            }
            let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Domain(e.to_string()))?;
            writeln!(out, "{text}").map_err(io)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for rec in &report.csv {
                w.write_record(rec).map_err(|e| Failure::Domain(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?;
            out.write_all(&bytes).map_err(io)?;
        }
        OutputFormat::Table => {
            let rows = report.table.as_ref().unwrap_or(&report.csv);
            write_table(rows, out).map_err(io)?;
        }
    }
    match report.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn write_table(rows: &[Vec<String>], out: &mut dyn Write) -> std::io::Result<()> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn short(v: f64) -> String {
    if !v.is_finite() {
        "-".into()
    } else if v != 0.0 && (v.abs() >= 1e6 || v.abs() < 1e-4) {
        format!("{v:.4e}")
    } else {
        format!("{v:.6}")
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> std::result::Result<Report, Failure> {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Sample(a) => cmd_sample(cli, a),
        Command::Fit(a) => cmd_fit(cli, a),
        Command::Compare(a) => cmd_compare(cli, a),
        Command::Gof(a) => cmd_gof(cli, a),
        Command::Simulate(a) => cmd_simulate(cli, a, stderr),
        Command::Curves(a) => cmd_curves(a),
    }
}

fn parse_spec(name: &str) -> std::result::Result<ModelSpec, Failure> {
    name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

/// Builds the model from the flags, requiring every free parameter.
fn resolve_model(p: &ParamArgs) -> std::result::Result<(ModelSpec, Params, Model), Failure> {
    let spec = parse_spec(&p.model)?;
    let mask = spec.free_mask();
    let given = [p.alpha, p.beta, p.lambda];
    let names = ["alpha", "beta", "lambda"];
    let mut values = [1.0; 3];
    for i in 0..3 {
        match (mask[i], given[i]) {
            (true, Some(v)) => values[i] = v,
            (true, None) => return Err(Failure::Usage(format!("--{} is required for model {}", names[i], spec.family))),
            (false, Some(_)) => {
                return Err(Failure::Usage(format!("--{} is fixed by model {} and cannot be set", names[i], spec.family)))
            }
            (false, None) => {}
        }
    }
    let params = spec.complete(Params { alpha: values[0], beta: values[1], lambda: values[2] });
    let model = spec.model(params)?;
    Ok((spec, params, model))
}

fn load_data(name: &str) -> std::result::Result<Sample, Failure> {
    let r: DatasetRef = name.parse()?;
    Ok(r.load()?)
}

fn fit_options(cli: &Cli) -> FitOptions {
    FitOptions { omega: cli.omega, restarts: cli.restarts, seed: cli.seed, extra_starts: Vec::new() }
}

fn check_globals(cli: &Cli) -> Outcome {
    if !(cli.omega > 0.0 && cli.omega < 1.0) {
        return Err(Failure::Usage(format!("--omega must lie in (0, 1), got {}", cli.omega)));
    }
    if cli.restarts == 0 {
        return Err(Failure::Usage("--restarts must be at least 1".into()));
    }
    Ok(())
}

fn cmd_eval(a: &EvalArgs) -> std::result::Result<Report, Failure> {
    let (_, _, model) = resolve_model(&a.params)?;
    let (label, points) = match a.function {
        Function::Quantile => ("u", &a.u),
        _ => ("x", &a.x),
    };
    if points.is_empty() {
        return Err(Failure::Usage(format!("--{label} needs at least one value")));
    }
    let fname = format!("{:?}", a.function).to_lowercase();
    let mut values = Vec::with_capacity(points.len());
    for &p in points {
        let v = match a.function {
            Function::Pdf => model.pdf(p),
            Function::Cdf => model.cdf(p),
            Function::Survival => model.survival(p),
            Function::Hazard => model.hazard(p)?,
            Function::Quantile => model.quantile(p)?,
        };
        values.push(v);
    }
    let mut csv = vec![vec![label.to_string(), fname.clone()]];
    csv.extend(points.iter().zip(&values).map(|(p, v)| vec![num(*p), num(*v)]));
    let json = json!({
        "function": fname,
        "points": points.iter().zip(&values).map(|(p, v)| json!({ label: p, "value": v })).collect::<Vec<_>>(),
    });
    Ok(Report::new(json, csv))
}

fn cmd_sample(cli: &Cli, a: &SampleArgs) -> std::result::Result<Report, Failure> {
    let (_, _, model) = resolve_model(&a.params)?;
    let values = model.sample(&mut RngStream::new(cli.seed), a.n);
    let mut csv = vec![vec!["x".to_string()]];
    csv.extend(values.iter().map(|v| vec![num(*v)]));
    Ok(Report::new(json!({ "values": values }), csv))
}

fn fit_rows(f: &FitResult) -> Vec<Vec<String>> {
    let mut rows = vec![["model", "parameter", "estimate", "std_error", "ci_lower", "ci_upper", "neg2loglik", "aic", "converged"]
        .map(String::from)
        .to_vec()];
    for (k, name) in f.free_parameters.iter().enumerate() {
        let est = f.estimates.as_array()[["alpha", "beta", "lambda"].iter().position(|n| n == name).unwrap_or(0)];
        let se = f.vcov.as_ref().map(|v| v[k][k].sqrt()).unwrap_or(f64::NAN);
        let (lo, hi) = f
            .ci
            .as_ref()
            .and_then(|c| c.get(k))
            .map(|iv| (iv.lower, iv.upper))
            .unwrap_or((f64::NAN, f64::NAN));
        rows.push(vec![
            f.spec.family.name().to_string(),
            name.clone(),
            num(est),
            num(se),
            num(lo),
            num(hi),
            num(f.neg2loglik),
            num(f.aic),
            f.converged.to_string(),
        ]);
    }
    rows
}

fn cmd_fit(cli: &Cli, a: &FitArgs) -> std::result::Result<Report, Failure> {
    check_globals(cli)?;
    let mut spec = parse_spec(&a.model)?;
    let mask = spec.free_mask();
    if let Some(v) = a.fix_alpha {
        if !mask[0] {
            return Err(Failure::Usage(format!("alpha is not a free parameter of {}", spec.family)));
        }
        spec.fixed_alpha = Some(v);
    }
    if let Some(v) = a.fix_lambda {
        if !mask[2] {
            return Err(Failure::Usage(format!("lambda is not a free parameter of {}", spec.family)));
        }
        spec.fixed_lambda = Some(v);
    }
    let sample = load_data(&a.data)?;
    let f = fit(&spec, &sample, &fit_options(cli))?;
    let csv = fit_rows(&f);
    let table = csv.iter().map(|r| r.iter().map(|c| c.parse::<f64>().map(short).unwrap_or_else(|_| c.clone())).collect()).collect();
    let failure = (!f.converged).then(|| {
        Failure::Domain(format!(
            "fit of {} did not converge (gradient norm {:.3e}, information {})",
            spec.family,
            f.trace.gradient_norm,
            if f.vcov.is_some() { "positive definite" } else { "not positive definite" }
        ))
    });
    Ok(Report { json: serde_json::to_value(&f).map_err(|e| Failure::Domain(e.to_string()))?, csv, table: Some(table), failure })
}

fn method(bootstrap: Option<usize>) -> std::result::Result<PvalueMethod, Failure> {
    match bootstrap {
        None => Ok(PvalueMethod::Asymptotic),
        Some(0) => Err(Failure::Usage("--bootstrap needs at least one replicate".into())),
        Some(b) => Ok(PvalueMethod::Bootstrap { replicates: b }),
    }
}

/// Column names of the comparison CSV.
pub const COMPARE_HEADER: [&str; 15] = [
    "rank", "model", "alpha", "beta", "lambda", "neg2loglik", "aic", "ks", "ks_p", "cvm", "cvm_p", "ad", "ad_p", "converged", "error",
];

fn compare_rows(t: &ComparisonTable, render: fn(f64) -> String) -> Vec<Vec<String>> {
    let mut rows = vec![COMPARE_HEADER.map(String::from).to_vec()];
    for (i, r) in t.rows.iter().enumerate() {
        let nan = f64::NAN;
        let e = r.fit.as_ref().map(|f| f.estimates.as_array()).unwrap_or([nan; 3]);
        let g = r.gof.clone().unwrap_or(GofReport {
            ks: nan,
            ks_p: nan,
            cvm: nan,
            cvm_p: nan,
            ad: nan,
            ad_p: nan,
            method: PvalueMethod::Asymptotic,
            bootstrap_failures: 0,
        });
        rows.push(vec![
            (i + 1).to_string(),
            r.model.clone(),
            render(e[0]),
            render(e[1]),
            render(e[2]),
            render(r.neg2loglik().unwrap_or(nan)),
            render(r.aic().unwrap_or(nan)),
            render(g.ks),
            render(g.ks_p),
            render(g.cvm),
            render(g.cvm_p),
            render(g.ad),
            render(g.ad_p),
            r.converged().to_string(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    rows
}

fn cmd_compare(cli: &Cli, a: &CompareArgs) -> std::result::Result<Report, Failure> {
    check_globals(cli)?;
    let specs = if a.models.is_empty() {
        default_battery()
    } else {
        a.models.iter().map(|m| parse_spec(m)).collect::<std::result::Result<Vec<_>, _>>()?
    };
    let sample = load_data(&a.data)?;
    let opts = CompareOptions { fit: fit_options(cli), method: method(a.bootstrap)? };
    let table = compare_models(&sample, &specs, &opts)?;
    let failing: Vec<&str> = table.rows.iter().filter(|r| !r.converged()).map(|r| r.model.as_str()).collect();
    let failure = (cli.strict && !failing.is_empty())
        .then(|| Failure::Domain(format!("models without a converged fit: {}", failing.join(", "))));
    Ok(Report {
        json: serde_json::to_value(&table).map_err(|e| Failure::Domain(e.to_string()))?,
        csv: compare_rows(&table, num),
        table: Some(compare_rows(&table, short)),
        failure,
    })
}

fn cmd_gof(cli: &Cli, a: &GofArgs) -> std::result::Result<Report, Failure> {
    check_globals(cli)?;
    let sample = load_data(&a.data)?;
    let given = [a.params.alpha, a.params.beta, a.params.lambda];
    let (spec, params, fitted) = if given.iter().all(Option::is_none) {
        let spec = parse_spec(&a.params.model)?;
        let f = fit(&spec, &sample, &fit_options(cli))?;
        (spec, f.estimates, Some(f))
    } else {
        let (spec, params, _) = resolve_model(&a.params)?;
        (spec, params, None)
    };
    let report = gof_report(&spec, &params, &sample, method(a.bootstrap)?, &fit_options(cli))?;
    let header = ["model", "alpha", "beta", "lambda", "ks", "ks_p", "cvm", "cvm_p", "ad", "ad_p"];
    let row = |r: fn(f64) -> String| {
        vec![
            spec.family.name().to_string(),
            r(params.alpha),
            r(params.beta),
            r(params.lambda),
            r(report.ks),
            r(report.ks_p),
            r(report.cvm),
            r(report.cvm_p),
            r(report.ad),
            r(report.ad_p),
        ]
    };
    let head = header.map(String::from).to_vec();
    let failure = fitted
        .as_ref()
        .filter(|f| cli.strict && !f.converged)
        .map(|_| Failure::Domain(format!("fit of {} did not converge", spec.family)));
    Ok(Report {
        json: json!({ "spec": spec, "params": params, "fitted": fitted.is_some(), "gof": report }),
        csv: vec![head.clone(), row(num)],
        table: Some(vec![head, row(short)]),
        failure,
    })
}

#[derive(Serialize)]
struct CellSummary<'a> {
    #[serde(flatten)]
    row: TableRow,
    used: usize,
    refits: usize,
    failures: usize,
    unreliable: bool,
    trimmed: &'a crate::simstudy::TrimmedDiagnostics,
}

fn simulation_json(report: &SimReport) -> serde_json::Value {
    let cells: Vec<CellSummary> = report
        .cells
        .iter()
        .map(|c| CellSummary {
            row: TableRow::from(c),
            used: c.used,
            refits: c.refits,
            failures: c.failures,
            unreliable: c.unreliable,
            trimmed: &c.trimmed,
        })
        .collect();
    json!({ "design": report.design, "cells": cells })
}

fn cmd_simulate(cli: &Cli, a: &SimulateArgs, stderr: &mut dyn Write) -> std::result::Result<Report, Failure> {
    check_globals(cli)?;
    let reps = if a.full { FULL_REPLICATIONS } else { a.reps };
    let mut design = match a.preset {
        Preset::Table1 => SimDesign::table1(reps, cli.seed),
    };
    design.omega = cli.omega;
    design.restarts = cli.restarts;
    if !a.sizes.is_empty() {
        design.sizes = a.sizes.clone();
    }
    design.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = run_study_with_progress(&design, |c| {
        let _ = writeln!(
            stderr,
            "cell n={} truth=({}, {}, {}) done in {:.1}s: {} refits, {} failures{}",
            c.n,
            c.truth.alpha,
            c.truth.beta,
            c.truth.lambda,
            c.wall_clock_secs,
            c.refits,
            c.failures,
            if c.unreliable { " (unreliable)" } else { "" }
        );
    })?;
    let text = export_table(&report);
    let csv: Vec<Vec<String>> = text.lines().map(|l| l.split(',').map(String::from).collect()).collect();
    let table = csv.iter().map(|r| r.iter().map(|c| c.parse::<f64>().map(short).unwrap_or_else(|_| c.clone())).collect()).collect();
    let unreliable = report.cells.iter().filter(|c| c.unreliable).count();
    let failure = (cli.strict && unreliable > 0)
        .then(|| Failure::Domain(format!("{unreliable} cell(s) exceed the failure-rate limit")));
    Ok(Report { json: simulation_json(&report), csv, table: Some(table), failure })
}

fn cmd_curves(a: &CurvesArgs) -> std::result::Result<Report, Failure> {
    let (_, _, model) = resolve_model(&a.params)?;
    if !(a.step > 0.0) || !(a.to >= a.from) || a.from < 0.0 {
        return Err(Failure::Usage("curves need 0 <= --from <= --to and --step > 0".into()));
    }
    let count = ((a.to - a.from) / a.step + 1e-9).floor() as usize + 1;
    let mut csv = vec![["x", "pdf", "cdf", "hazard"].map(String::from).to_vec()];
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let x = a.from + i as f64 * a.step;
        let (pdf, cdf) = (model.pdf(x), model.cdf(x));
        let hazard = model.hazard(x).ok();
        csv.push(vec![num(x), num(pdf), num(cdf), hazard.map(num).unwrap_or_default()]);
        points.push(json!({ "x": x, "pdf": pdf, "cdf": cdf, "hazard": hazard }));
    }
    Ok(Report::new(json!({ "points": points }), csv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("pngkme").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn csv_column(text: &str, col: usize) -> Vec<f64> {
        text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
    }

    #[test]
    fn eval_trivial_values() {
        let (code, out, _) = call(&["eval", "--alpha", "1", "--beta", "1", "--lambda", "1", "--fn", "cdf", "--x", "0.6931", "--output", "csv"]);
        assert_eq!(code, 0);
        assert!((csv_column(&out, 1)[0] - 0.5).abs() < 1e-4);
        let (_, out, _) = call(&["eval", "--alpha", "2", "--beta", "1", "--lambda", "2", "--fn", "quantile", "--u", "0", "--output", "csv"]);
        assert_eq!(csv_column(&out, 1)[0], 0.0);
    }

    #[test]
    fn usage_and_domain_errors() {
        assert_eq!(call(&["eval", "--alpha", "1", "--fn", "cdf", "--x", "1"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["eval", "--alpha", "1", "--beta", "1", "--lambda", "1", "--fn", "sideways", "--x", "1"]).0, 2);
        assert_eq!(call(&["eval", "--model", "ee", "--alpha", "1", "--beta", "1", "--lambda", "2", "--fn", "cdf", "--x", "1"]).0, 2);
        let (code, _, err) = call(&["eval", "--alpha", "-1", "--beta", "1", "--lambda", "1", "--fn", "cdf", "--x", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("error"));
        assert_eq!(call(&["eval", "--alpha", "1", "--beta", "1", "--lambda", "1", "--fn", "quantile", "--u", "1.5"]).0, 1);
        assert_eq!(call(&["fit", "--model", "ee", "--data", "/nonexistent/file"]).0, 1);
        assert_eq!(call(&["fit", "--model", "ee", "--fix-lambda", "2"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn exponential_fit_json() {
        let (code, out, _) = call(&["fit", "--model", "exponential"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["config"]["command"]["fit"]["model"], "exponential");
        assert_eq!(v["config"]["seed"], DEFAULT_SEED);
        let beta = v["result"]["estimates"]["beta"].as_f64().unwrap();
        assert!((beta - 128.0 / (9.365625 * 128.0)).abs() < 1e-8);
        assert!(v.get("error").is_none());
    }

    #[test]
    fn fit_with_fixed_parameter() {
        let (code, out, _) = call(&["fit", "--model", "pngkme", "--fix-lambda", "1", "--output", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        assert!(out.lines().nth(1).unwrap().starts_with("PNGKME,alpha,"));
    }

    #[test]
    fn curves_shapes() {
        let (code, out, _) = call(&["curves", "--alpha", "1", "--beta", "1", "--lambda", "1", "--from", "0", "--to", "5", "--step", "0.01"]);
        assert_eq!(code, 0);
        let h = csv_column(&out, 3);
        assert_eq!(h.len(), 501);
        assert!(h.iter().all(|v| (v - 1.0).abs() < 1e-9));
        let (_, out, _) = call(&["curves", "--alpha", "2", "--beta", "1", "--lambda", "2", "--from", "0", "--to", "8", "--step", "0.01"]);
        let cdf = csv_column(&out, 2);
        assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
        let pdf = csv_column(&out, 1);
        let d: Vec<f64> = pdf.windows(2).skip(1).map(|w| w[1] - w[0]).collect();
        let changes = d.windows(2).filter(|w| w[0] > 0.0 && w[1] <= 0.0 || w[0] < 0.0 && w[1] >= 0.0).count();
        assert_eq!(changes, 1);
    }

    #[test]
    fn sample_is_seeded() {
        let args = ["sample", "--alpha", "2", "--beta", "1", "--lambda", "3", "--n", "5", "--seed", "9"];
        let (code, a, _) = call(&args);
        assert_eq!(code, 0);
        assert_eq!(a, call(&args).1);
        assert_eq!(a.lines().count(), 6);
        assert_ne!(a, call(&["sample", "--alpha", "2", "--beta", "1", "--lambda", "3", "--n", "5", "--seed", "10"]).1);
    }

    #[test]
    fn compare_single_model_csv_reparses() {
        let (code, out, _) = call(&["compare", "--models", "exponential,ee", "--output", "csv"]);
        assert_eq!(code, 0);
        let mut r = csv::Reader::from_reader(out.as_bytes());
        assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), COMPARE_HEADER.to_vec());
        let recs: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(recs.len(), 2);
        let (_, js, _) = call(&["compare", "--models", "exponential,ee", "--output", "json"]);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        for (i, rec) in recs.iter().enumerate() {
            let row = &v["result"]["rows"][i];
            assert_eq!(rec[1], *row["model"].as_str().unwrap());
            assert_eq!(rec[6].parse::<f64>().unwrap(), row["fit"]["aic"].as_f64().unwrap());
            assert_eq!(rec[8].parse::<f64>().unwrap(), row["gof"]["ks_p"].as_f64().unwrap());
        }
    }

    #[test]
    fn gof_at_given_parameters() {
        let (code, out, _) = call(&["gof", "--model", "exponential", "--beta", "0.1068", "--output", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["fitted"], false);
        assert!(v["result"]["gof"]["ks"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn simulate_small_design_is_reproducible() {
        let args = ["simulate", "--reps", "3", "--sizes", "30,60", "--seed", "4", "--restarts", "2"];
        let (code, a, err) = call(&args);
        assert_eq!(code, 0, "{err}");
        assert_eq!(a.lines().count(), 1 + 8);
        assert_eq!(a, call(&args).1);
        assert!(err.contains("cell n=30"));
        assert_eq!(call(&["simulate", "--reps", "0"]).0, 2);
    }
}
