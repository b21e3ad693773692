use std::process::{Command, Output};

fn pngkme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pngkme")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn eval_json_envelope() {
    let out = pngkme(&["--output", "json", "eval", "--alpha", "1", "--beta", "2", "--lambda", "1", "--fn", "cdf", "--x", "0.5,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["config"]["output"], "json");
    let text = v["result"].to_string();
    assert!(text.contains("0.63212"), "{text}");
}

#[test]
fn sample_csv_has_header_and_rows() {
    let out = pngkme(&["--seed", "3", "sample", "--alpha", "2", "--beta", "1", "--lambda", "3", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.split(',').last().unwrap().parse::<f64>().unwrap() > 0.0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pngkme(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pngkme(&["eval", "--fn", "cdf"]).status.code(), Some(2));
    assert_eq!(pngkme(&["--output", "yaml", "fit", "--model", "ee"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let out = pngkme(&["fit", "--model", "ee", "--data", "/nonexistent/data.txt"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pngkme(&["eval", "--alpha", "1", "--beta", "1", "--lambda", "1", "--fn", "quantile", "--u", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pngkme(&["eval", "--fn", "cdf", "--x", "1", "--alpha", "-1", "--beta", "1", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = pngkme(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("simulate"));
}

#[test]
fn fit_reports_converged_exponential() {
    let out = pngkme(&["fit", "--model", "exponential"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let beta = v["result"]["estimates"]["beta"].as_f64().unwrap();
    assert!((beta - 1.0 / 9.365625).abs() < 1e-6);
    assert_eq!(v["result"]["converged"], true);
}

#[test]
fn compare_subset_table_and_csv() {
    let out = pngkme(&["--output", "csv", "compare", "--models", "exponential,ee"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("rank,model"), "{header}");
    let first = lines.next().unwrap();
    assert!(first.starts_with("1,EE,"), "EE should rank first by AIC: {first}");
}
