//! `wmm bench` — wall-times the structured operations and emits one CSV
//! row per size with the median over the requested repetitions.

use crate::args::Args;
use std::time::Instant;
use wmm_core::emit::fmt_f64;
use wmm_core::wass::Wass1D;

pub const USAGE: &str = "wmm bench --op matvec|solve --sizes LIST [--reps INT] [--lambda REAL]";

fn noise(n: usize) -> Vec<f64> {
    let mut state = 0x9E3779B97F4A7C15u64;
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^= z >> 31;
            2.0 * ((z >> 11) as f64 / 9007199254740992.0) - 1.0
        })
        .collect()
}

/// Medians resist timer noise better than means at these durations.
pub fn median_seconds(op: &str, q: &Wass1D, x: &[f64], reps: usize) -> f64 {
    let run = |_: usize| {
        let start = Instant::now();
        let out = match op {
            "matvec" => q.matvec(x),
            _ => q.solve(x),
        };
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(out.unwrap());
        elapsed
    };
    run(0); // warm up caches and the allocator
    let mut times: Vec<f64> = (0..reps).map(run).collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

pub fn run(tokens: &[String]) -> Result<i32, String> {
    let args = Args::parse(tokens, &["op", "sizes", "reps", "lambda"], &[])?;
    let op: String = args.required("op")?;
    if op != "matvec" && op != "solve" {
        return Err(format!("--op must be matvec or solve, got {op:?}"));
    }
    let sizes: Vec<usize> = args
        .list("sizes")?
        .ok_or_else(|| "missing required flag --sizes".to_string())?;
    if sizes.is_empty() || sizes.iter().any(|&n| n < 1) {
        return Err("--sizes must list orders ≥ 1".to_string());
    }
    let reps: usize = args.optional("reps")?.unwrap_or(5);
    if reps < 1 {
        return Err("--reps must be at least 1".to_string());
    }
    let lambda: f64 = args.optional("lambda")?.unwrap_or(0.5);

    println!("n,seconds");
    for &n in &sizes {
        let q = Wass1D::new(n, lambda).map_err(|e| e.to_string())?;
        let x = noise(n);
        let median = median_seconds(&op, &q, &x, reps);
        println!("{n},{}", fmt_f64(median));
    }
    Ok(0)
}
