//! `wmm sinkhorn` — loads two distribution files, solves the
//! entropy-regularized transport problem on a uniform grid, and emits the
//! result as JSON.

use crate::args::Args;
use std::fs;
use wmm_core::sinkhorn::{
    self, parse_distribution_1d, parse_distribution_2d, DiscreteDist, Shape, SinkhornError,
    SinkhornProblem,
};

pub const USAGE: &str = "wmm sinkhorn --source FILE --target FILE --h REAL --epsilon REAL [--tol REAL] [--max-iter INT] [--grid2d N,M]";

fn load(path: &str, grid: Option<(usize, usize)>) -> Result<DiscreteDist, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    match grid {
        None => parse_distribution_1d(&text).map_err(|e| format!("{path}: {e}")),
        Some((n, m)) => {
            let d = parse_distribution_2d(&text).map_err(|e| format!("{path}: {e}"))?;
            if d.shape() != (Shape::TwoD { n, m }) {
                return Err(format!(
                    "{path}: grid shape {:?} does not match --grid2d {n},{m}",
                    d.shape()
                ));
            }
            Ok(d)
        }
    }
}

pub fn run(tokens: &[String]) -> Result<i32, String> {
    let args = Args::parse(
        tokens,
        &[
            "source", "target", "h", "epsilon", "tol", "max-iter", "grid2d",
        ],
        &[],
    )?;
    let source: String = args.required("source")?;
    let target: String = args.required("target")?;
    let h: f64 = args.required("h")?;
    let epsilon: f64 = args.required("epsilon")?;
    let tol: f64 = args.optional("tol")?.unwrap_or(1e-8);
    let max_iter: usize = args.optional("max-iter")?.unwrap_or(100_000);
    if tol <= 0.0 {
        return Err("--tol must be positive".to_string());
    }
    let grid = match args.list::<usize>("grid2d")? {
        None => None,
        Some(dims) => match dims.as_slice() {
            [n, m] if *n >= 1 && *m >= 1 => Some((*n, *m)),
            _ => return Err("--grid2d expects two positive integers N,M".to_string()),
        },
    };

    let u = load(&source, grid)?;
    let v = load(&target, grid)?;
    let problem = SinkhornProblem::new(h, epsilon, u, v).map_err(|e| e.to_string())?;
    match sinkhorn::solve(&problem, tol, max_iter) {
        Ok(result) => {
            println!("{}", result.to_json());
            if result.converged {
                Ok(0)
            } else {
                eprintln!(
                    "did not converge within {max_iter} iterations (marginal error {:.3e})",
                    result.marginal_error
                );
                Ok(1)
            }
        }
        Err(err @ SinkhornError::Underflow { .. }) => {
            eprintln!("{err}");
            Ok(1)
        }
        Err(err) => Err(err.to_string()),
    }
}
