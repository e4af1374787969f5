//! `wmm bounds` — one bound report for a 1D kernel, or for the 2D
//! Kronecker kernel when `--m`/`--lambda2` are given.

use crate::args::Args;
use wmm_core::bounds::{bounds_1d, bounds_2d, BoundReport};
use wmm_core::wass::{Wass1D, Wass2D};

pub const USAGE: &str =
    "wmm bounds --n INT --lambda REAL [--m INT --lambda2 REAL] [--exact] [--format csv|json]";

pub fn run(tokens: &[String]) -> Result<i32, String> {
    let args = Args::parse(
        tokens,
        &["n", "lambda", "m", "lambda2", "format"],
        &["exact"],
    )?;
    let n: usize = args.required("n")?;
    let lambda: f64 = args.required("lambda")?;
    let with_exact = args.switch("exact");
    let format = args.get("format").unwrap_or("json");
    if format != "json" && format != "csv" {
        return Err(format!("--format must be csv or json, got {format:?}"));
    }

    let m: Option<usize> = args.optional("m")?;
    let lambda2: Option<f64> = args.optional("lambda2")?;
    let report: BoundReport = match (m, lambda2) {
        (None, None) => {
            let q = Wass1D::new(n, lambda).map_err(|e| e.to_string())?;
            bounds_1d(&q, with_exact)
        }
        (Some(m), Some(lambda2)) => {
            let q1 = Wass1D::new(n, lambda).map_err(|e| e.to_string())?;
            let q2 = Wass1D::new(m, lambda2).map_err(|e| e.to_string())?;
            bounds_2d(&Wass2D::new(q1, q2), with_exact)
        }
        _ => return Err("--m and --lambda2 must be given together".to_string()),
    };

    match format {
        "json" => println!("{}", report.to_json()),
        _ => print!("{}", report.to_csv()),
    }
    Ok(if report.all_pass == Some(false) { 1 } else { 0 })
}
