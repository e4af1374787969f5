//! `wmm spectrum` — eigenvalue localization report: the row-sum disc, the
//! numerical-range enclosure, the spectral-radius lower bound, and (with
//! `--dense`) the reference eigenvalues plus containment verdicts.

use crate::args::Args;
use crate::cmds::dense_limit;
use wmm_core::bounds::{formulas, gershgorin_region};
use wmm_core::dense::dense_eigs_symmetric;
use wmm_core::emit::fmt_f64;
use wmm_core::wass::Wass1D;

pub const USAGE: &str = "wmm spectrum --n INT --lambda REAL [--dense]";

pub fn run(tokens: &[String]) -> Result<i32, String> {
    let args = Args::parse(tokens, &["n", "lambda"], &["dense"])?;
    let n: usize = args.required("n")?;
    let lambda: f64 = args.required("lambda")?;
    let q = Wass1D::new(n, lambda).map_err(|e| e.to_string())?;

    let disc = gershgorin_region(&q);
    let range_upper = formulas::range_endpoint(n, lambda);
    let rho_lower = formulas::rho_lower(n, lambda);

    let mut json = format!(
        "{{\"n\":{},\"lambda\":{},\"gershgorin\":{{\"center\":{},\"radius\":{},\"in_zero_two\":{}}}",
        n,
        fmt_f64(lambda),
        fmt_f64(disc.center),
        fmt_f64(disc.radius),
        disc.in_zero_two
    );
    match range_upper {
        Some(v) => json.push_str(&format!(",\"range_upper\":{}", fmt_f64(v))),
        None => json.push_str(",\"range_upper\":null,\"range_note\":\"not applicable (n=1)\""),
    }
    match rho_lower {
        Some(v) => json.push_str(&format!(",\"rho_lower\":{}", fmt_f64(v))),
        None => json.push_str(",\"rho_lower\":null"),
    }

    let mut failed = false;
    if args.switch("dense") {
        let limit = dense_limit()?;
        let dense = q
            .materialize_capped(limit)
            .map_err(|e| format!("--dense: {e}"))?;
        let eig = dense_eigs_symmetric(&dense).map_err(|e| e.to_string())?;
        let lo = eig.values[0];
        let hi = *eig.values.last().unwrap();
        let in_disc = eig
            .values
            .iter()
            .all(|v| (v - disc.center).abs() <= disc.radius + 1e-12);
        let positive = lo > 0.0;
        let within_range = range_upper.map(|r| hi <= r + 1e-12);
        failed = !in_disc || !positive || within_range == Some(false);

        json.push_str(",\"eigenvalues\":[");
        for (i, v) in eig.values.iter().enumerate() {
            if i > 0 {
                json.push(',');
            }
            json.push_str(&fmt_f64(*v));
        }
        json.push_str(&format!(
            "],\"contained_in_disc\":{in_disc},\"positive\":{positive}"
        ));
        match within_range {
            Some(w) => json.push_str(&format!(",\"within_range\":{w}")),
            None => json.push_str(",\"within_range\":null"),
        }
    }
    json.push('}');
    println!("{json}");
    Ok(if failed { 1 } else { 0 })
}
