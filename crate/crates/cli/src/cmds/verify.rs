//! `wmm verify` — runs the full grid certification and prints one summary
//! row per suite, preceded by any violations. Exit 0 only when every
//! suite is clean.

use crate::args::Args;
use wmm_core::emit::fmt_f64;
use wmm_core::verify::{run_all, VerifyConfig};

pub const USAGE: &str = "wmm verify [--max-n INT] [--n LIST] [--lambdas LIST] [--threads INT] [--self-test-corrupt QUANTITY]";

pub fn run(tokens: &[String]) -> Result<i32, String> {
    let args = Args::parse(
        tokens,
        &["max-n", "n", "lambdas", "threads", "self-test-corrupt"],
        &[],
    )?;
    let mut config = VerifyConfig::default();
    if let Some(max_n) = args.optional::<usize>("max-n")? {
        if max_n < 1 {
            return Err("--max-n must be at least 1".to_string());
        }
        config.n_values = (1..=max_n).collect();
    }
    if let Some(ns) = args.list::<usize>("n")? {
        if ns.is_empty() || ns.iter().any(|&n| n < 1) {
            return Err("--n must list orders ≥ 1".to_string());
        }
        config.n_values = ns;
        config.n_values.sort_unstable();
        config.n_values.dedup();
    }
    if let Some(ls) = args.list::<f64>("lambdas")? {
        if ls.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
            return Err("--lambdas values must lie strictly between 0 and 1".to_string());
        }
        config.lambdas = ls;
        config.lambdas.sort_by(f64::total_cmp);
        config.lambdas.dedup();
    }
    if let Some(threads) = args.optional::<usize>("threads")? {
        if threads < 1 {
            return Err("--threads must be at least 1".to_string());
        }
        config.threads = threads;
    }
    // Harness self-test: deliberately corrupt one bound formula so the
    // failure path is observable end to end.
    config.corrupt_quantity = args.get("self-test-corrupt").map(str::to_string);

    let outcomes = run_all(&config);
    let mut all_pass = true;
    for outcome in &outcomes {
        for v in &outcome.violations {
            println!("violation,{}", v.describe().replace('/', ","));
        }
    }
    println!("suite,checks,violations,worst_margin");
    for outcome in &outcomes {
        all_pass &= outcome.passed();
        println!(
            "{},{},{},{}",
            outcome.name,
            outcome.checks,
            outcome.violations.len(),
            fmt_f64(outcome.worst_margin)
        );
    }
    Ok(if all_pass { 0 } else { 1 })
}
