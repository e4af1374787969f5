//! `wmm table1` — the spectral-norm upper-bound comparison table for the
//! Hadamard inverse versus the ordinary inverse, as CSV.

use crate::args::Args;
use wmm_core::hadamard::{table1, table1_csv};

pub const USAGE: &str = "wmm table1 [--lambda REAL] [--ns LIST]";

pub fn run(tokens: &[String]) -> Result<i32, String> {
    let args = Args::parse(tokens, &["lambda", "ns"], &[])?;
    let lambda: f64 = args.optional("lambda")?.unwrap_or(0.5);
    let ns: Vec<usize> = args.list("ns")?.unwrap_or_else(|| vec![1, 2, 3, 4, 5, 10]);
    let rows = table1(lambda, &ns).map_err(|e| e.to_string())?;
    print!("{}", table1_csv(&rows));
    Ok(0)
}
