//! Exact norms in closed form, certified lower/upper bounds on norms,
//! condition numbers, spectra, and numerical ranges of the 1D and 2D
//! kernel matrices, plus eigenvalue-inclusion regions and Cayley-transform
//! checks.
//!
//! Each bound is evaluated as a closed-form real. A [`BoundReport`] can
//! additionally carry exact values (closed forms where available, power /
//! inverse iteration for the spectral extremes, the dense reference for
//! the strictly-lower factor's 2-norm) together with per-quantity pass
//! flags and slack.
//!
//! Several inequalities degenerate at order 1, where `Q = [1]` and the
//! strictly lower factor is empty; those bounds are reported as absent
//! (`None`) for n = 1 rather than asserted. Order 1 keeps the bounds that
//! remain valid there (the 1-norm pair, the inverse 2-norm pair, and the
//! condition-number sides that stay true).

use crate::config::Tolerances;
use crate::dense::{dense_eigs_symmetric, dense_inverse, dense_norm, DenseMat, NormKind};
use crate::emit::{fmt_f64, fmt_opt_bool, fmt_opt_f64};
use crate::wass::{Wass1D, Wass2D, WassError};
use std::f64::consts::PI;
use thiserror::Error;

/// Largest order at which `with_exact` reports run the dense eigensolve
/// for the lower factor's 2-norm; above it the closed-form bound stands in
/// (the composite bounds remain valid upper bounds).
const L2_ORACLE_LIMIT: usize = 512;

/// Iteration budget used when a report fills exact spectral extremes.
const REPORT_POWER_MAX_ITER: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("operation requires order at least 2; order 1 is degenerate")]
    DegenerateOrder,
    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
}

// ---------------------------------------------------------------------------
// Closed-form bound expressions (1D). Each returns `None` outside the
// order domain on which the inequality holds.
// ---------------------------------------------------------------------------

/// Formula layer for the 1D bounds; shared by the report builder and the
/// grid verification suites.
pub mod formulas {
    /// Lower bound for ‖Q‖₁ and ‖Q‖₂: `1/(1+λ)²`.
    pub fn norm_lower(lambda: f64) -> f64 {
        1.0 / ((1.0 + lambda) * (1.0 + lambda))
    }

    /// Upper bound for ‖Q‖₁ = ‖Q‖_∞: `1 + 2λ(1−λ^{n−1})/(1−λ)`.
    pub fn norm1_upper(n: usize, lambda: f64) -> f64 {
        1.0 + 2.0 * lambda * (1.0 - lambda.powi(n as i32 - 1)) / (1.0 - lambda)
    }

    /// Baseline upper bound `(1+λ)/(1−λ)` for ‖Q‖₁ and ‖Q⁻¹‖₁.
    pub fn baseline_norm1(lambda: f64) -> f64 {
        (1.0 + lambda) / (1.0 - lambda)
    }

    /// Exact positive gap `baseline − norm1_upper = 2λⁿ/(1−λ)`, evaluated
    /// directly so strictness survives floating-point resolution.
    pub fn norm1_tightening_gap(n: usize, lambda: f64) -> f64 {
        2.0 * lambda.powi(n as i32) / (1.0 - lambda)
    }

    /// Upper bound for the strictly lower factor's 2-norm:
    /// `√((n−2+λ²)(1 + (λ⁴−λ^{2n})/(1−λ²)))` for n ≥ 2. The factor is
    /// zero at n = 1, where the expression degenerates.
    pub fn lower_factor_norm2_upper(n: usize, lambda: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        let l2 = lambda * lambda;
        let tail = 1.0 + (l2 * l2 - lambda.powi(2 * n as i32)) / (1.0 - l2);
        Some(((n as f64 - 2.0 + l2) * tail).sqrt())
    }

    /// The three-way min upper bound for ‖Q‖₂:
    /// `min{1+2‖L‖₂, (3−λ)/(1−λ), 2(1+λ)(1−λ^{n−1})/(1−λ)}` for n ≥ 2.
    pub fn norm2_upper(n: usize, lambda: f64, lower_factor_norm2: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        let a = 1.0 + 2.0 * lower_factor_norm2;
        let b = (3.0 - lambda) / (1.0 - lambda);
        let c = 2.0 * (1.0 + lambda) * (1.0 - lambda.powi(n as i32 - 1)) / (1.0 - lambda);
        Some(a.min(b).min(c))
    }

    /// Lower bound for ‖Q⁻¹‖₁: `(1−λ)/((1+λ)(1−λⁿ)²)` for n ≥ 2.
    pub fn inv_norm1_lower(n: usize, lambda: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        let t = 1.0 - lambda.powi(n as i32);
        Some((1.0 - lambda) / ((1.0 + lambda) * t * t))
    }

    /// Lower bound for ‖Q⁻¹‖₂: `(1−λ)/(1+λ)`.
    pub fn inv_norm2_lower(lambda: f64) -> f64 {
        (1.0 - lambda) / (1.0 + lambda)
    }

    /// Upper bound for ‖Q⁻¹‖₂: `(1+λ)/(1−λ)`.
    pub fn inv_norm2_upper(lambda: f64) -> f64 {
        (1.0 + lambda) / (1.0 - lambda)
    }

    /// Lower bound for κ₁: `(1−λ)/((1+λ)³(1−λⁿ)²)` for n ≥ 2.
    pub fn cond1_lower(n: usize, lambda: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        let t = 1.0 - lambda.powi(n as i32);
        let p = 1.0 + lambda;
        Some((1.0 - lambda) / (p * p * p * t * t))
    }

    /// Upper bound for κ₁: `(1+λ)(1−λ+2λ(1−λ^{n−1}))/(1−λ)²`.
    pub fn cond1_upper(n: usize, lambda: f64) -> f64 {
        (1.0 + lambda) * (1.0 - lambda + 2.0 * lambda * (1.0 - lambda.powi(n as i32 - 1)))
            / ((1.0 - lambda) * (1.0 - lambda))
    }

    /// Baseline upper bound for κ₁: `(1+λ)²/(1−λ)²`.
    pub fn baseline_cond1(lambda: f64) -> f64 {
        let r = baseline_norm1(lambda);
        r * r
    }

    /// Exact positive gap `baseline_cond1 − cond1_upper = 2λⁿ(1+λ)/(1−λ)²`.
    pub fn cond1_tightening_gap(n: usize, lambda: f64) -> f64 {
        2.0 * lambda.powi(n as i32) * (1.0 + lambda) / ((1.0 - lambda) * (1.0 - lambda))
    }

    /// Lower bound for κ₂: `(1−λ)/(1+λ)³`.
    pub fn cond2_lower(lambda: f64) -> f64 {
        let p = 1.0 + lambda;
        (1.0 - lambda) / (p * p * p)
    }

    /// Upper bound for κ₂: `(1+λ)/(1−λ)` times the ‖Q‖₂ upper bound.
    pub fn cond2_upper(n: usize, lambda: f64, lower_factor_norm2: f64) -> Option<f64> {
        norm2_upper(n, lambda, lower_factor_norm2).map(|u| inv_norm2_upper(lambda) * u)
    }

    /// Lower bound for the spectral radius: `1+λ`, valid for n ≥ 2 (it is
    /// derived through the order-2 principal submatrix).
    pub fn rho_lower(n: usize, lambda: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        Some(1.0 + lambda)
    }

    /// Eigenvalue upper bound `1 + 2‖L‖₂ cos(π/(n+1))` for n ≥ 2.
    pub fn eig_upper(n: usize, lower_factor_norm2: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        Some(1.0 + 2.0 * lower_factor_norm2 * (std::f64::consts::PI / (n as f64 + 1.0)).cos())
    }

    /// Right endpoint of the numerical-range interval:
    /// `(1+λ)(1−λ^{n−1})/(1−λ)` for n ≥ 2 (zero and meaningless at n = 1).
    pub fn range_endpoint(n: usize, lambda: f64) -> Option<f64> {
        if n < 2 {
            return None;
        }
        Some((1.0 + lambda) * (1.0 - lambda.powi(n as i32 - 1)) / (1.0 - lambda))
    }
}

// ---------------------------------------------------------------------------
// Exact quantities with structured evaluation
// ---------------------------------------------------------------------------

/// Exact `‖Q‖₁ = ‖Q‖_∞`: max row sum, O(n) via per-row geometric sums.
pub fn exact_norm1(q: &Wass1D) -> f64 {
    let n = q.order();
    let lambda = q.lambda();
    // prefix[k] = 1 + λ + … + λ^k, built by one running product.
    let mut prefix = vec![0.0; n];
    let mut pow = 1.0;
    let mut acc = 1.0;
    prefix[0] = 1.0;
    for k in 1..n {
        pow *= lambda;
        acc += pow;
        prefix[k] = acc;
    }
    (0..n)
        .map(|i| prefix[i] + prefix[n - 1 - i] - 1.0)
        .fold(0.0, f64::max)
}

/// Exact `‖Q⁻¹‖₁ = ‖Q⁻¹‖_∞` from the closed tridiagonal form, O(1):
/// 1 for n = 1, `1/(1−λ)` for n = 2, `(1+λ)/(1−λ)` for n ≥ 3.
pub fn exact_inv_norm1(q: &Wass1D) -> f64 {
    let lambda = q.lambda();
    match q.order() {
        1 => 1.0,
        2 => 1.0 / (1.0 - lambda),
        _ => (1.0 + lambda) / (1.0 - lambda),
    }
}

/// Spectral extremes found by power iteration (largest) and inverse
/// iteration through the O(n) solve (smallest).
#[derive(Debug, Clone, Copy)]
pub struct Norm2Extremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub iterations_max: usize,
    pub iterations_min: usize,
}

/// Runs power iteration for the largest eigenvalue (all-ones start: the
/// matrix is entrywise positive, so the start is never orthogonal to the
/// dominant eigenvector) and inverse iteration for the smallest (fixed
/// pseudo-random start: the all-ones vector can be exactly orthogonal to
/// the bottom eigenvector, e.g. at n = 2). Convergence is declared when
/// the Rayleigh quotient's relative change drops below `tol`.
pub fn norm2_extremes(q: &Wass1D, tol: f64, max_iter: usize) -> Result<Norm2Extremes, BoundsError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = q.order();
    let ones = vec![1.0; n];
    let (lambda_max, iterations_max) =
        rayleigh_iterate(&ones, tol, max_iter, |v| q.matvec(v).expect("length fixed"))?;
    let start = splitmix_start(n);
    let (inv_rayleigh, iterations_min) =
        rayleigh_iterate(&start, tol, max_iter, |v| q.solve(v).expect("length fixed"))?;
    Ok(Norm2Extremes {
        lambda_min: 1.0 / inv_rayleigh,
        lambda_max,
        iterations_max,
        iterations_min,
    })
}

fn splitmix_start(n: usize) -> Vec<f64> {
    let mut state: u64 = 0x0DDB1A5E5BAD5EED;
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^= z >> 31;
            (z >> 11) as f64 / 9007199254740992.0 + 0.5
        })
        .collect()
}

fn rayleigh_iterate(
    start: &[f64],
    tol: f64,
    max_iter: usize,
    apply: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<(f64, usize), BoundsError> {
    let mut v = start.to_vec();
    normalize(&mut v);
    let mut prev = f64::NAN;
    for iter in 1..=max_iter {
        let w = apply(&v);
        let rho: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        if prev.is_finite() && (rho - prev).abs() <= tol * rho.abs() {
            return Ok((rho, iter));
        }
        prev = rho;
        v = w;
        normalize(&mut v);
    }
    Err(BoundsError::NoConvergence {
        iterations: max_iter,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm > 0.0, "iteration vector collapsed to zero");
    for x in v.iter_mut() {
        *x /= norm;
    }
}

// ---------------------------------------------------------------------------
// Bound reports
// ---------------------------------------------------------------------------

/// Which matrix a report describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixDesc {
    OneD {
        n: usize,
        lambda: f64,
    },
    TwoD {
        n: usize,
        lambda: f64,
        m: usize,
        lambda2: f64,
    },
}

/// One certified quantity: exact value (when computed), bounds, the prior
/// baseline bound where one exists, and the pass/slack verdict.
///
/// `alt_lower`/`alt_upper` appear only on 2D reports for the bounds whose
/// published form evaluates both factors' order-dependent terms at the
/// first factor's order; they are recorded for comparison and never
/// checked.
#[derive(Debug, Clone)]
pub struct QuantityBounds {
    pub name: &'static str,
    pub exact: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub baseline: Option<f64>,
    pub alt_lower: Option<f64>,
    pub alt_upper: Option<f64>,
    pub pass: Option<bool>,
    pub slack: Option<f64>,
}

impl QuantityBounds {
    fn new(name: &'static str) -> Self {
        QuantityBounds {
            name,
            exact: None,
            lower: None,
            upper: None,
            baseline: None,
            alt_lower: None,
            alt_upper: None,
            pass: None,
            slack: None,
        }
    }

    /// Fills pass/slack from the exact value and whichever comparisons are
    /// present. Slack is the worst remaining margin (negative = violated
    /// beyond tolerance).
    fn judge(&mut self, tols: &Tolerances) {
        let Some(exact) = self.exact else {
            return;
        };
        let mut pass = true;
        let mut slack = f64::INFINITY;
        for upper in [self.upper, self.baseline].into_iter().flatten() {
            let margin = upper - exact;
            slack = slack.min(margin);
            if margin < -tols.bound_slack(upper) {
                pass = false;
            }
        }
        if let Some(lower) = self.lower {
            let margin = exact - lower;
            slack = slack.min(margin);
            if margin < -tols.bound_slack(lower) {
                pass = false;
            }
        }
        if slack.is_finite() {
            self.pass = Some(pass);
            self.slack = Some(slack);
        }
    }
}

/// Collection of certified quantities for one matrix.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub desc: MatrixDesc,
    pub quantities: Vec<QuantityBounds>,
    /// `Some(true)` when every judged quantity passed; `None` when no
    /// exact values were requested.
    pub all_pass: Option<bool>,
}

impl BoundReport {
    pub fn quantity(&self, name: &str) -> Option<&QuantityBounds> {
        self.quantities.iter().find(|q| q.name == name)
    }

    fn finalize(&mut self, tols: &Tolerances) {
        let mut any = false;
        let mut all = true;
        for q in &mut self.quantities {
            q.judge(tols);
            if let Some(p) = q.pass {
                any = true;
                all &= p;
            }
        }
        self.all_pass = if any { Some(all) } else { None };
    }

    /// JSON with stable field names and ordering:
    /// `{"n","lambda"[,"m","lambda2"],"quantities":[{"name","exact","lower",
    /// "upper","baseline","pass","slack"}…],"all_pass"}`.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{");
        match self.desc {
            MatrixDesc::OneD { n, lambda } => {
                s.push_str(&format!("\"n\":{},\"lambda\":{}", n, fmt_f64(lambda)));
            }
            MatrixDesc::TwoD {
                n,
                lambda,
                m,
                lambda2,
            } => {
                s.push_str(&format!(
                    "\"n\":{},\"lambda\":{},\"m\":{},\"lambda2\":{}",
                    n,
                    fmt_f64(lambda),
                    m,
                    fmt_f64(lambda2)
                ));
            }
        }
        s.push_str(",\"quantities\":[");
        for (i, q) in self.quantities.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!(
                "{{\"name\":\"{}\",\"exact\":{},\"lower\":{},\"upper\":{},\"baseline\":{}",
                q.name,
                fmt_opt_f64(q.exact),
                fmt_opt_f64(q.lower),
                fmt_opt_f64(q.upper),
                fmt_opt_f64(q.baseline)
            ));
            if let Some(v) = q.alt_lower {
                s.push_str(&format!(",\"alt_lower\":{}", fmt_f64(v)));
            }
            if let Some(v) = q.alt_upper {
                s.push_str(&format!(",\"alt_upper\":{}", fmt_f64(v)));
            }
            s.push_str(&format!(
                ",\"pass\":{},\"slack\":{}}}",
                fmt_opt_bool(q.pass),
                fmt_opt_f64(q.slack)
            ));
        }
        s.push_str(&format!("],\"all_pass\":{}}}", fmt_opt_bool(self.all_pass)));
        s
    }

    /// CSV rows `name,exact,lower,upper,baseline,pass,slack` with header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,exact,lower,upper,baseline,pass,slack\n");
        for q in &self.quantities {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                q.name,
                fmt_opt_f64(q.exact),
                fmt_opt_f64(q.lower),
                fmt_opt_f64(q.upper),
                fmt_opt_f64(q.baseline),
                fmt_opt_bool(q.pass),
                fmt_opt_f64(q.slack)
            ));
        }
        s
    }
}

/// Exact ingredients a 1D report can be filled with.
struct ExactSet {
    norm1: f64,
    inv_norm1: f64,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lower_factor_norm2: Option<f64>,
}

fn exact_set_1d(q: &Wass1D, tols: &Tolerances) -> ExactSet {
    let extremes = norm2_extremes(q, tols.power_tol, REPORT_POWER_MAX_ITER).ok();
    let lf = if q.order() >= 2 && q.order() <= L2_ORACLE_LIMIT {
        q.lower_factor_capped(L2_ORACLE_LIMIT)
            .ok()
            .map(|l| dense_norm(&l, NormKind::Two))
    } else if q.order() == 1 {
        Some(0.0)
    } else {
        None
    };
    ExactSet {
        norm1: exact_norm1(q),
        inv_norm1: exact_inv_norm1(q),
        lambda_min: extremes.map(|e| e.lambda_min),
        lambda_max: extremes.map(|e| e.lambda_max),
        lower_factor_norm2: lf,
    }
}

/// Builds the full 1D bound report. With `with_exact` set, exact values
/// come from the closed-form norms, power/inverse iteration, and (for the
/// lower factor's 2-norm, up to order 512) the dense reference; pass flags
/// and slack are then filled. Without it only the bound formulas are
/// evaluated.
pub fn bounds_1d(q: &Wass1D, with_exact: bool) -> BoundReport {
    let tols = Tolerances::default();
    let n = q.order();
    let lambda = q.lambda();
    let exact = with_exact.then(|| exact_set_1d(q, &tols));

    // ‖L‖₂ entering the composite bounds: the reference value when
    // available, otherwise its own closed-form upper bound (keeps every
    // composite a valid upper bound).
    let lf_bound = formulas::lower_factor_norm2_upper(n, lambda);
    let lf_for_bounds = exact
        .as_ref()
        .and_then(|e| e.lower_factor_norm2)
        .or(lf_bound)
        .unwrap_or(0.0);

    let mut quantities = Vec::new();

    let mut norm1 = QuantityBounds::new("norm1");
    norm1.lower = Some(formulas::norm_lower(lambda));
    norm1.upper = Some(formulas::norm1_upper(n, lambda));
    norm1.baseline = Some(formulas::baseline_norm1(lambda));
    norm1.exact = exact.as_ref().map(|e| e.norm1);
    quantities.push(norm1);

    let mut norm2 = QuantityBounds::new("norm2");
    norm2.lower = Some(formulas::norm_lower(lambda));
    norm2.upper = formulas::norm2_upper(n, lambda, lf_for_bounds);
    norm2.exact = exact.as_ref().and_then(|e| e.lambda_max);
    quantities.push(norm2);

    let mut norm2_vs_order = QuantityBounds::new("norm2_vs_order");
    norm2_vs_order.upper = Some(n as f64);
    norm2_vs_order.exact = exact.as_ref().and_then(|e| e.lambda_max);
    quantities.push(norm2_vs_order);

    let mut inv_norm1 = QuantityBounds::new("inv_norm1");
    inv_norm1.lower = formulas::inv_norm1_lower(n, lambda);
    inv_norm1.baseline = Some(formulas::baseline_norm1(lambda));
    inv_norm1.exact = exact.as_ref().map(|e| e.inv_norm1);
    quantities.push(inv_norm1);

    let mut inv_norm2 = QuantityBounds::new("inv_norm2");
    inv_norm2.lower = Some(formulas::inv_norm2_lower(lambda));
    inv_norm2.upper = Some(formulas::inv_norm2_upper(lambda));
    inv_norm2.exact = exact.as_ref().and_then(|e| e.lambda_min).map(|lm| 1.0 / lm);
    quantities.push(inv_norm2);

    let mut cond1 = QuantityBounds::new("cond1");
    cond1.lower = formulas::cond1_lower(n, lambda);
    cond1.upper = Some(formulas::cond1_upper(n, lambda));
    cond1.baseline = Some(formulas::baseline_cond1(lambda));
    cond1.exact = exact.as_ref().map(|e| e.norm1 * e.inv_norm1);
    quantities.push(cond1);

    let mut cond2 = QuantityBounds::new("cond2");
    cond2.lower = Some(formulas::cond2_lower(lambda));
    cond2.upper = formulas::cond2_upper(n, lambda, lf_for_bounds);
    cond2.exact = exact
        .as_ref()
        .and_then(|e| Some(e.lambda_max? / e.lambda_min?));
    quantities.push(cond2);

    let mut rho = QuantityBounds::new("rho");
    rho.lower = formulas::rho_lower(n, lambda);
    rho.upper = exact
        .as_ref()
        .and_then(|e| e.lower_factor_norm2)
        .or(lf_bound)
        .and_then(|l2| formulas::eig_upper(n, l2));
    rho.exact = exact.as_ref().and_then(|e| e.lambda_max);
    quantities.push(rho);

    let mut range_upper = QuantityBounds::new("range_upper");
    range_upper.upper = formulas::range_endpoint(n, lambda);
    range_upper.exact = exact.as_ref().and_then(|e| e.lambda_max);
    quantities.push(range_upper);

    let mut eig_min = QuantityBounds::new("eig_min");
    eig_min.lower = Some(0.0);
    eig_min.exact = exact.as_ref().and_then(|e| e.lambda_min);
    quantities.push(eig_min);

    let mut lf = QuantityBounds::new("lower_factor_norm2");
    lf.upper = lf_bound;
    lf.exact = exact.as_ref().and_then(|e| e.lower_factor_norm2);
    quantities.push(lf);

    if let Some(e) = exact.as_ref() {
        // κ₂ ≤ 2ω(Q)‖Q⁻¹‖₂ with ω(Q) = λ_max for the symmetric kernel.
        if let (Some(max), Some(min)) = (e.lambda_max, e.lambda_min) {
            let mut via_radius = QuantityBounds::new("cond2_vs_omega");
            via_radius.exact = Some(max / min);
            via_radius.upper = Some(2.0 * max / min);
            quantities.push(via_radius);
        }
    }

    let mut report = BoundReport {
        desc: MatrixDesc::OneD { n, lambda },
        quantities,
        all_pass: None,
    };
    report.finalize(&tols);
    report
}

/// Builds the 2D report by composing the per-factor quantities
/// multiplicatively (operator norms, spectra, and numerical-range
/// endpoints of a Kronecker product all factor). Every bound evaluates
/// each factor at its own order; `alt_*` fields additionally record the
/// variant with both factors' order terms evaluated at the first factor's
/// order, for comparison only.
pub fn bounds_2d(q: &Wass2D, with_exact: bool) -> BoundReport {
    let tols = Tolerances::default();
    let q1 = q.factor1();
    let q2 = q.factor2();
    let (n, l1) = (q1.order(), q1.lambda());
    let (m, l2) = (q2.order(), q2.lambda());
    let e1 = with_exact.then(|| exact_set_1d(q1, &tols));
    let e2 = with_exact.then(|| exact_set_1d(q2, &tols));

    let lf1 = e1
        .as_ref()
        .and_then(|e| e.lower_factor_norm2)
        .or(formulas::lower_factor_norm2_upper(n, l1))
        .unwrap_or(0.0);
    let lf2 = e2
        .as_ref()
        .and_then(|e| e.lower_factor_norm2)
        .or(formulas::lower_factor_norm2_upper(m, l2))
        .unwrap_or(0.0);

    let prod = |a: Option<f64>, b: Option<f64>| Some(a? * b?);
    let lambda_max_prod = match (&e1, &e2) {
        (Some(a), Some(b)) => prod(a.lambda_max, b.lambda_max),
        _ => None,
    };
    let lambda_min_prod = match (&e1, &e2) {
        (Some(a), Some(b)) => prod(a.lambda_min, b.lambda_min),
        _ => None,
    };

    let mut quantities = Vec::new();

    let mut norm1 = QuantityBounds::new("norm1");
    norm1.lower = Some(formulas::norm_lower(l1) * formulas::norm_lower(l2));
    norm1.upper = Some(formulas::norm1_upper(n, l1) * formulas::norm1_upper(m, l2));
    norm1.alt_upper = Some(formulas::norm1_upper(n, l1) * formulas::norm1_upper(n, l2));
    norm1.baseline = Some(formulas::baseline_norm1(l1) * formulas::baseline_norm1(l2));
    norm1.exact = match (&e1, &e2) {
        (Some(a), Some(b)) => Some(a.norm1 * b.norm1),
        _ => None,
    };
    quantities.push(norm1);

    let mut norm2 = QuantityBounds::new("norm2");
    norm2.lower = Some(formulas::norm_lower(l1) * formulas::norm_lower(l2));
    norm2.upper = prod(
        formulas::norm2_upper(n, l1, lf1),
        formulas::norm2_upper(m, l2, lf2),
    );
    norm2.exact = lambda_max_prod;
    quantities.push(norm2);

    let mut norm2_vs_order = QuantityBounds::new("norm2_vs_order");
    norm2_vs_order.upper = Some((n * m) as f64);
    norm2_vs_order.exact = lambda_max_prod;
    quantities.push(norm2_vs_order);

    let mut inv_norm1 = QuantityBounds::new("inv_norm1");
    inv_norm1.lower = prod(
        formulas::inv_norm1_lower(n, l1),
        formulas::inv_norm1_lower(m, l2),
    );
    inv_norm1.alt_lower = prod(
        formulas::inv_norm1_lower(n, l1),
        formulas::inv_norm1_lower(n, l2),
    );
    inv_norm1.baseline = Some(formulas::baseline_norm1(l1) * formulas::baseline_norm1(l2));
    inv_norm1.exact = match (&e1, &e2) {
        (Some(a), Some(b)) => Some(a.inv_norm1 * b.inv_norm1),
        _ => None,
    };
    quantities.push(inv_norm1);

    let mut inv_norm2 = QuantityBounds::new("inv_norm2");
    inv_norm2.lower = Some(formulas::inv_norm2_lower(l1) * formulas::inv_norm2_lower(l2));
    inv_norm2.upper = Some(formulas::inv_norm2_upper(l1) * formulas::inv_norm2_upper(l2));
    inv_norm2.exact = lambda_min_prod.map(|p| 1.0 / p);
    quantities.push(inv_norm2);

    let mut cond1 = QuantityBounds::new("cond1");
    cond1.lower = prod(formulas::cond1_lower(n, l1), formulas::cond1_lower(m, l2));
    cond1.alt_lower = prod(formulas::cond1_lower(n, l1), formulas::cond1_lower(n, l2));
    cond1.upper = Some(formulas::cond1_upper(n, l1) * formulas::cond1_upper(m, l2));
    cond1.alt_upper = Some(formulas::cond1_upper(n, l1) * formulas::cond1_upper(n, l2));
    cond1.baseline = Some(formulas::baseline_cond1(l1) * formulas::baseline_cond1(l2));
    cond1.exact = match (&e1, &e2) {
        (Some(a), Some(b)) => Some(a.norm1 * b.norm1 * a.inv_norm1 * b.inv_norm1),
        _ => None,
    };
    quantities.push(cond1);

    let mut cond2 = QuantityBounds::new("cond2");
    cond2.lower = Some(formulas::cond2_lower(l1) * formulas::cond2_lower(l2));
    cond2.upper = prod(
        formulas::cond2_upper(n, l1, lf1),
        formulas::cond2_upper(m, l2, lf2),
    );
    cond2.exact = match (lambda_max_prod, lambda_min_prod) {
        (Some(mx), Some(mn)) => Some(mx / mn),
        _ => None,
    };
    quantities.push(cond2);

    let mut rho = QuantityBounds::new("rho");
    rho.lower = prod(formulas::rho_lower(n, l1), formulas::rho_lower(m, l2));
    rho.upper = prod(formulas::eig_upper(n, lf1), formulas::eig_upper(m, lf2));
    rho.exact = lambda_max_prod;
    quantities.push(rho);

    let mut range_upper = QuantityBounds::new("range_upper");
    range_upper.upper = prod(
        formulas::range_endpoint(n, l1),
        formulas::range_endpoint(m, l2),
    );
    range_upper.alt_upper = prod(
        formulas::range_endpoint(n, l1),
        formulas::range_endpoint(n, l2),
    );
    range_upper.exact = lambda_max_prod;
    quantities.push(range_upper);

    let mut eig_min = QuantityBounds::new("eig_min");
    eig_min.lower = Some(0.0);
    eig_min.exact = lambda_min_prod;
    quantities.push(eig_min);

    let mut report = BoundReport {
        desc: MatrixDesc::TwoD {
            n,
            lambda: l1,
            m,
            lambda2: l2,
        },
        quantities,
        all_pass: None,
    };
    report.finalize(&tols);
    report
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

/// Eigenvalue-inclusion disc from the row sums: every eigenvalue lies in
/// the disc centered at the unit diagonal with radius the largest
/// off-diagonal row sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GershgorinDisc {
    pub center: f64,
    pub radius: f64,
    /// Whether the disc certifies the whole spectrum inside (0, 2); true
    /// exactly when the radius is below 1, which holds whenever λ ≤ 1/3.
    pub in_zero_two: bool,
}

/// The disc for `Q(n, λ)`: center 1, radius `max row sum − 1`, O(n).
pub fn gershgorin_region(q: &Wass1D) -> GershgorinDisc {
    let radius = exact_norm1(q) - 1.0;
    GershgorinDisc {
        center: 1.0,
        radius,
        in_zero_two: radius < 1.0,
    }
}

/// Half-open interval `(lo, hi]` enclosing the numerical range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeInterval {
    pub lo_exclusive: f64,
    pub hi_inclusive: f64,
}

/// Numerical-range enclosure `W(Q) ⊂ (0, (1+λ)(1−λ^{n−1})/(1−λ)]`.
/// Requires n ≥ 2: at n = 1 the endpoint expression collapses to zero
/// while `W(Q) = {1}`, so order 1 is outside the enclosure's domain.
pub fn numerical_range_interval(q: &Wass1D) -> Result<RangeInterval, BoundsError> {
    let endpoint =
        formulas::range_endpoint(q.order(), q.lambda()).ok_or(BoundsError::DegenerateOrder)?;
    Ok(RangeInterval {
        lo_exclusive: 0.0,
        hi_inclusive: endpoint,
    })
}

// ---------------------------------------------------------------------------
// Cayley transform checks
// ---------------------------------------------------------------------------

/// Outcome of the dense Cayley-transform verification for one kernel.
#[derive(Debug, Clone, Copy)]
pub struct CayleyChecks {
    pub symmetric: bool,
    pub max_asymmetry: f64,
    pub round_trip: bool,
    pub round_trip_error: f64,
    /// `F = (I+Q)⁻¹(I−Q)` always has an eigenvalue ≤ 0 because ρ(Q) ≥ 1,
    /// so the transform is never positive definite.
    pub has_nonpositive_eigenvalue: bool,
    pub min_eigenvalue: f64,
}

impl CayleyChecks {
    pub fn all_pass(&self) -> bool {
        self.symmetric && self.round_trip && self.has_nonpositive_eigenvalue
    }
}

/// Computes `F = (I+Q)⁻¹(I−Q)` densely and verifies: F symmetric (1e−10),
/// the round trip `(I+F)⁻¹(I−F) = Q` (1e−9), and that F has at least one
/// eigenvalue ≤ 0.
pub fn cayley_checks(q: &Wass1D, dense_limit: usize) -> Result<CayleyChecks, WassError> {
    let dense = q.materialize_capped(dense_limit)?;
    let n = q.order();
    let id = DenseMat::identity(n);
    let plus = DenseMat::from_fn(n, |i, j| id.get(i, j) + dense.get(i, j));
    let minus = DenseMat::from_fn(n, |i, j| id.get(i, j) - dense.get(i, j));
    let f = dense_inverse(&plus)
        .expect("I+Q is positive definite")
        .matmul(&minus);

    let max_asymmetry = f.max_asymmetry();
    let symmetric = max_asymmetry <= 1e-10;

    let f_plus = DenseMat::from_fn(n, |i, j| id.get(i, j) + f.get(i, j));
    let f_minus = DenseMat::from_fn(n, |i, j| id.get(i, j) - f.get(i, j));
    let round = dense_inverse(&f_plus)
        .expect("I+F is nonsingular on the kernel family")
        .matmul(&f_minus);
    let round_trip_error = round.max_abs_diff(&dense);
    let round_trip = round_trip_error <= 1e-9;

    let sym_f = DenseMat::from_fn(n, |i, j| 0.5 * (f.get(i, j) + f.get(j, i)));
    let eig = dense_eigs_symmetric(&sym_f).expect("symmetrized F");
    let min_eigenvalue = eig.values[0];
    let has_nonpositive_eigenvalue = min_eigenvalue <= 1e-12;

    Ok(CayleyChecks {
        symmetric,
        max_asymmetry,
        round_trip,
        round_trip_error,
        has_nonpositive_eigenvalue,
        min_eigenvalue,
    })
}

/// Eigenvalue image of the Cayley transform: μ ↦ (1−μ)/(1+μ).
pub fn cayley_eigenvalue_map(mu: f64) -> f64 {
    (1.0 - mu) / (1.0 + mu)
}

// Re-exported for the containment suites: cos(π/(n+1)) shows up in the
// eigenvalue bound and is worth one shared definition.
pub fn nilpotent_angle_cos(n: usize) -> f64 {
    (PI / (n as f64 + 1.0)).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::dense_solve;

    fn kernel(n: usize, lambda: f64) -> Wass1D {
        Wass1D::new(n, lambda).unwrap()
    }

    #[test]
    fn exact_norm1_small_cases() {
        assert_eq!(exact_norm1(&kernel(1, 0.5)), 1.0);
        assert!((exact_norm1(&kernel(2, 0.5)) - 1.5).abs() < 1e-15);
        // Middle row of Q(5, 0.5): 1 + 2(0.5 + 0.25) = 2.5, checked against
        // the dense row-sum reference.
        let q = kernel(5, 0.5);
        assert!((exact_norm1(&q) - 2.5).abs() < 1e-15);
        let dense = dense_norm(&q.materialize().unwrap(), NormKind::One);
        assert!((exact_norm1(&q) - dense).abs() < 1e-14);
    }

    #[test]
    fn exact_inv_norm1_saturates_at_order_three() {
        assert_eq!(exact_inv_norm1(&kernel(1, 0.5)), 1.0);
        for &n in &[3usize, 10] {
            let q = kernel(n, 0.5);
            assert!((exact_inv_norm1(&q) - 3.0).abs() < 1e-15);
            let inv = dense_inverse(&q.materialize().unwrap()).unwrap();
            let dense = dense_norm(&inv, NormKind::One);
            assert!(
                (exact_inv_norm1(&q) - dense).abs() < 1e-10,
                "n={n}: {} vs {dense}",
                exact_inv_norm1(&q)
            );
        }
    }

    #[test]
    fn norm2_extremes_known_spectra() {
        let e = norm2_extremes(&kernel(2, 0.5), 1e-12, 100_000).unwrap();
        assert!((e.lambda_max - 1.5).abs() < 1e-10, "{}", e.lambda_max);
        assert!((e.lambda_min - 0.5).abs() < 1e-10, "{}", e.lambda_min);

        let e = norm2_extremes(&kernel(1, 0.5), 1e-12, 1000).unwrap();
        assert!((e.lambda_max - 1.0).abs() < 1e-14);
        assert!((e.lambda_min - 1.0).abs() < 1e-14);
    }

    #[test]
    fn norm2_extremes_match_dense_eigensolve() {
        for &(n, lambda) in &[(5usize, 0.3f64), (17, 0.8), (64, 0.05)] {
            let q = kernel(n, lambda);
            let e = norm2_extremes(&q, 1e-12, 2_000_000).unwrap();
            let eig = dense_eigs_symmetric(&q.materialize().unwrap()).unwrap();
            let (lo, hi) = (eig.values[0], *eig.values.last().unwrap());
            assert!(
                (e.lambda_max - hi).abs() <= 1e-8 * hi,
                "n={n} λ={lambda}: {} vs {hi}",
                e.lambda_max
            );
            assert!(
                (e.lambda_min - lo).abs() <= 1e-8 * lo.max(1e-3),
                "n={n} λ={lambda}: {} vs {lo}",
                e.lambda_min
            );
        }
    }

    #[test]
    fn norm2_extremes_order_256() {
        // At this order the extreme eigenvalues cluster, so the Rayleigh
        // change criterion needs a tolerance below the target accuracy
        // divided by the relative spectral gap.
        for &(lambda, tol) in &[(0.5f64, 1e-12f64), (0.05, 1e-13)] {
            let q = kernel(256, lambda);
            let e = norm2_extremes(&q, tol, 4_000_000).unwrap();
            let eig = dense_eigs_symmetric(&q.materialize().unwrap()).unwrap();
            let (lo, hi) = (eig.values[0], *eig.values.last().unwrap());
            assert!(
                (e.lambda_max - hi).abs() <= 1e-8 * hi,
                "λ={lambda}: {} vs {hi}",
                e.lambda_max
            );
            assert!(
                (e.lambda_min - lo).abs() <= 1e-8 * lo,
                "λ={lambda}: {} vs {lo}",
                e.lambda_min
            );
        }
    }

    #[test]
    fn norm2_extremes_errors_when_budget_exhausted() {
        let q = kernel(48, 0.4);
        assert!(matches!(
            norm2_extremes(&q, 1e-15, 3),
            Err(BoundsError::NoConvergence { iterations: 3 })
        ));
    }

    #[test]
    fn bounds_report_example_values() {
        let r = bounds_1d(&kernel(5, 0.5), true);
        let norm1 = r.quantity("norm1").unwrap();
        assert!((norm1.upper.unwrap() - 2.875).abs() < 1e-15);
        assert!((norm1.baseline.unwrap() - 3.0).abs() < 1e-15);
        assert!((norm1.exact.unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(r.all_pass, Some(true));
    }

    #[test]
    fn bounds_report_order_one_norm1_is_tight() {
        let r = bounds_1d(&kernel(1, 0.5), true);
        let norm1 = r.quantity("norm1").unwrap();
        assert_eq!(norm1.exact.unwrap(), 1.0);
        assert_eq!(norm1.upper.unwrap(), 1.0);
        assert_eq!(r.all_pass, Some(true));
        // Degenerate-at-order-1 bounds must be absent rather than failing.
        assert!(r.quantity("rho").unwrap().lower.is_none());
        assert!(r.quantity("inv_norm1").unwrap().lower.is_none());
        assert!(r.quantity("norm2").unwrap().upper.is_none());
        assert!(r.quantity("range_upper").unwrap().upper.is_none());
        assert!(r.quantity("cond1").unwrap().lower.is_none());
        assert!(r.quantity("cond2").unwrap().upper.is_none());
    }

    #[test]
    fn rho_lower_is_tight_at_order_two() {
        let r = bounds_1d(&kernel(2, 0.5), true);
        let rho = r.quantity("rho").unwrap();
        assert!((rho.lower.unwrap() - 1.5).abs() < 1e-15);
        assert!((rho.exact.unwrap() - 1.5).abs() < 1e-10);
    }

    #[test]
    fn bounds_without_exact_have_no_verdicts() {
        let r = bounds_1d(&kernel(7, 0.3), false);
        assert_eq!(r.all_pass, None);
        assert!(r.quantities.iter().all(|q| q.exact.is_none()));
        assert!(r.quantities.iter().all(|q| q.pass.is_none()));
    }

    #[test]
    fn report_json_shape() {
        let r = bounds_1d(&kernel(2, 0.5), true);
        let json = r.to_json();
        assert!(json.starts_with("{\"n\":2,\"lambda\":0.5,\"quantities\":["));
        assert!(json.contains("\"name\":\"norm1\""));
        assert!(json.ends_with(",\"all_pass\":true}"));
        // Deterministic: same input, same bytes.
        assert_eq!(json, bounds_1d(&kernel(2, 0.5), true).to_json());
    }

    #[test]
    fn gershgorin_disc_radius_and_flag() {
        let d = gershgorin_region(&kernel(1, 0.5));
        assert_eq!(d.radius, 0.0);
        assert!(d.in_zero_two);

        // Max off-diagonal row sum of Q(3, 0.25) is at the middle row:
        // 2·0.25 = 0.5 (the boundary rows give 0.25 + 0.0625 = 0.3125).
        let d = gershgorin_region(&kernel(3, 0.25));
        assert!((d.radius - 0.5).abs() < 1e-15, "{}", d.radius);
        assert!(d.in_zero_two);
    }

    #[test]
    fn gershgorin_disc_contains_spectrum() {
        let q = kernel(8, 0.3);
        let d = gershgorin_region(&q);
        let eig = dense_eigs_symmetric(&q.materialize().unwrap()).unwrap();
        for v in eig.values {
            assert!((v - d.center).abs() <= d.radius + 1e-12, "{v} outside disc");
            assert!(v > 0.0 && v < 2.0);
        }
    }

    #[test]
    fn numerical_range_interval_examples() {
        let i = numerical_range_interval(&kernel(2, 0.5)).unwrap();
        assert!((i.hi_inclusive - 1.5).abs() < 1e-15);

        let i = numerical_range_interval(&kernel(5, 0.5)).unwrap();
        assert!((i.hi_inclusive - 2.8125).abs() < 1e-15);
        let eig = dense_eigs_symmetric(&kernel(5, 0.5).materialize().unwrap()).unwrap();
        assert!(*eig.values.last().unwrap() <= i.hi_inclusive + 1e-12);

        assert!(matches!(
            numerical_range_interval(&kernel(1, 0.5)),
            Err(BoundsError::DegenerateOrder)
        ));
    }

    #[test]
    fn numerical_range_tight_at_order_two() {
        // The exact range of Q(2, λ) is [1−λ, 1+λ], and the endpoint
        // formula evaluates to exactly 1+λ.
        for &lambda in &[0.1, 0.5, 0.9] {
            let i = numerical_range_interval(&kernel(2, lambda)).unwrap();
            assert!((i.hi_inclusive - (1.0 + lambda)).abs() < 1e-12);
        }
    }

    #[test]
    fn cayley_checks_small_cases() {
        // n = 1: F = [0], round trip gives [1].
        let c = cayley_checks(&kernel(1, 0.5), 64).unwrap();
        assert!(c.all_pass());
        assert!(c.min_eigenvalue.abs() < 1e-14);

        // n = 2, λ = 0.5: eigenvalues of F are (1−μ)/(1+μ) for μ ∈ {0.5, 1.5}.
        let c = cayley_checks(&kernel(2, 0.5), 64).unwrap();
        assert!(c.all_pass());
        assert!((c.min_eigenvalue - (-0.2)).abs() < 1e-10);
        assert!((cayley_eigenvalue_map(0.5) - 1.0 / 3.0).abs() < 1e-15);
        assert!((cayley_eigenvalue_map(1.5) - (-0.2)).abs() < 1e-15);

        let c = cayley_checks(&kernel(6, 0.4), 64).unwrap();
        assert!(c.all_pass());
    }

    #[test]
    fn bounds_2d_trivial_and_known() {
        let q = Wass2D::new(kernel(1, 0.5), kernel(1, 0.5));
        let r = bounds_2d(&q, true);
        let norm1 = r.quantity("norm1").unwrap();
        assert_eq!(norm1.exact.unwrap(), 1.0);
        assert_eq!(norm1.upper.unwrap(), 1.0);

        let q = Wass2D::new(kernel(2, 0.5), kernel(2, 0.5));
        let r = bounds_2d(&q, true);
        assert!((r.quantity("norm1").unwrap().exact.unwrap() - 2.25).abs() < 1e-12);
        let dense = dense_norm(&q.materialize_capped(64).unwrap(), NormKind::One);
        assert!((dense - 2.25).abs() < 1e-12);
        assert_eq!(r.all_pass, Some(true));
    }

    #[test]
    fn bounds_2d_inverse_norm_is_product() {
        let q = Wass2D::new(kernel(3, 0.5), kernel(2, 0.3));
        let r = bounds_2d(&q, true);
        let expected = 3.0 * (1.0 / 0.7);
        let got = r.quantity("inv_norm1").unwrap().exact.unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        // Dense Kronecker reference.
        let inv = dense_inverse(&q.materialize_capped(64).unwrap()).unwrap();
        let dense = dense_norm(&inv, NormKind::One);
        assert!((got - dense).abs() < 1e-9, "{got} vs {dense}");
    }

    #[test]
    fn bounds_2d_alt_fields_recorded_not_checked() {
        let q = Wass2D::new(kernel(4, 0.5), kernel(2, 0.3));
        let r = bounds_2d(&q, true);
        let norm1 = r.quantity("norm1").unwrap();
        assert!(norm1.alt_upper.is_some());
        assert_ne!(norm1.alt_upper, norm1.upper);
        assert_eq!(r.all_pass, Some(true));
    }

    #[test]
    fn solve_agreement_between_fast_and_dense() {
        let q = kernel(5, 0.5);
        let fast = q.solve(&[1.0; 5]).unwrap();
        let dense = dense_solve(&q.materialize().unwrap(), &[1.0; 5]).unwrap();
        for (a, b) in fast.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
