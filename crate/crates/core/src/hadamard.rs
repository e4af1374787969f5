//! Hadamard (entrywise) structure of the kernel matrix: the split
//! `Q = A ∘ Aᵀ`, the Hadamard inverse `Q^{∘−1}` with entries `λ^{−|i−j|}`,
//! closed-form norms and norm bounds for it, and the published comparison
//! table of spectral-norm upper bounds.
//!
//! The Hadamard-inverse formulas grow like `λ^{−(n−1)}`, so every closed
//! form goes through a shared log-space policy: when the exponent
//! magnitude exceeds [`LOG_SCALE_EXPONENT`]
//! the value is reported as a natural log with an explicit flag instead of
//! silently overflowing to infinity.

use crate::config::{DEFAULT_DENSE_LIMIT, LOG_SCALE_EXPONENT};
use crate::dense::DenseMat;
use crate::emit::{fmt_f64, fmt_integerish};
use crate::wass::{Wass1D, Wass2D, WassError};

/// A positive scalar that may be carried in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub value: f64,
    /// When set, `value` is the natural log of the quantity.
    pub is_log: bool,
}

impl LogValue {
    pub fn linear(value: f64) -> Self {
        LogValue {
            value,
            is_log: false,
        }
    }

    pub fn log(value: f64) -> Self {
        LogValue {
            value,
            is_log: true,
        }
    }

    /// Natural log of the represented quantity, whichever encoding.
    pub fn ln(&self) -> f64 {
        if self.is_log {
            self.value
        } else {
            self.value.ln()
        }
    }

    /// CSV/text form: linear values print shortest round-trip, preferring
    /// integers when within 1e−9 of one; log values carry a `ln:` prefix.
    pub fn render(&self) -> String {
        if self.is_log {
            format!("ln:{}", fmt_f64(self.value))
        } else {
            fmt_integerish(self.value)
        }
    }
}

/// Evaluates `exp(exponent_ln) · ratio` with the shared overflow policy:
/// linear when the exponent is small enough for f64, log otherwise.
fn eval_scaled(exponent_ln: f64, ratio: f64) -> LogValue {
    if exponent_ln.abs() > LOG_SCALE_EXPONENT {
        LogValue::log(exponent_ln + ratio.ln())
    } else {
        LogValue::linear(exponent_ln.exp() * ratio)
    }
}

/// Implicit Hadamard inverse of `Q(n, λ)`: entries `λ^{−|i−j|}`. Exists
/// for every kernel regardless of invertibility; its entrywise product
/// with `Q` is the all-ones matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardInverse {
    n: usize,
    lambda: f64,
    /// Whether norm values of this matrix need log-space reporting.
    pub log_scale: bool,
}

impl HadamardInverse {
    pub fn new(q: &Wass1D) -> Self {
        let n = q.order();
        let lambda = q.lambda();
        HadamardInverse {
            n,
            lambda,
            log_scale: (n as f64 - 1.0) * (1.0 / lambda).ln() > LOG_SCALE_EXPONENT,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Dense materialization; rejects orders whose largest entry
    /// `λ^{−(n−1)}` does not fit in f64, reporting the largest order that
    /// does as the effective limit.
    pub fn materialize_capped(&self, limit: usize) -> Result<DenseMat, WassError> {
        let representable =
            (crate::config::LOG_SCALE_EXPONENT / (1.0 / self.lambda).ln()) as usize + 1;
        let limit = limit.min(representable);
        if self.n > limit {
            return Err(WassError::DenseLimit {
                order: self.n,
                limit,
            });
        }
        let inv_lambda = 1.0 / self.lambda;
        let mut m = DenseMat::zeros(self.n);
        for i in 0..self.n {
            m.set(i, i, 1.0);
            let mut p = 1.0;
            for j in (0..i).rev() {
                p *= inv_lambda;
                m.set(i, j, p);
            }
            p = 1.0;
            for j in (i + 1)..self.n {
                p *= inv_lambda;
                m.set(i, j, p);
            }
        }
        Ok(m)
    }
}

/// Splits `Q = A ∘ Aᵀ` where `A` carries the decaying powers on and below
/// the diagonal and ones above it. The product is entrywise exact: both
/// factors reuse the same running-product rows as the dense kernel.
pub fn hadamard_split(q: &Wass1D, limit: usize) -> Result<(DenseMat, DenseMat), WassError> {
    let n = q.order();
    if n > limit {
        return Err(WassError::DenseLimit { order: n, limit });
    }
    let mut a = DenseMat::zeros(n);
    for i in 0..n {
        let row = q.power_row(i);
        for j in 0..n {
            a.set(i, j, if j <= i { row[j] } else { 1.0 });
        }
    }
    let at = a.transpose();
    Ok((a, at))
}

/// Exact `‖Q^{∘−1}‖₁ = ‖Q^{∘−1}‖_∞ = λ^{−(n−1)} (1−λⁿ)/(1−λ)`.
pub fn hinv_norm1_exact(h: &HadamardInverse) -> LogValue {
    let n = h.n as f64;
    let lambda = h.lambda;
    let exponent = (n - 1.0) * (1.0 / lambda).ln();
    let ratio = (1.0 - lambda.powi(h.n as i32)) / (1.0 - lambda);
    eval_scaled(exponent, ratio)
}

/// Upper bound `‖Q^{∘−1}‖₂ ≤ λ^{−2(n−1)} (1−λ^{2n})/(1−λ²)`.
pub fn hinv_norm2_bound(h: &HadamardInverse) -> LogValue {
    let n = h.n as f64;
    let lambda = h.lambda;
    let exponent = 2.0 * (n - 1.0) * (1.0 / lambda).ln();
    let ratio = (1.0 - lambda.powi(2 * h.n as i32)) / (1.0 - lambda * lambda);
    eval_scaled(exponent, ratio)
}

/// One row of the spectral-norm comparison table: the Hadamard-inverse
/// bound `y1`, the ordinary-inverse bound `y2 = (1+λ)/(1−λ)`, and their
/// difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub n: usize,
    pub y1: LogValue,
    pub y2: f64,
    pub diff: LogValue,
}

/// Builds the comparison table for the given λ and orders. In log mode
/// the difference is carried as `ln(y1 − y2)`, computed without leaving
/// log space.
pub fn table1(lambda: f64, ns: &[usize]) -> Result<Vec<Table1Row>, WassError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(WassError::InvalidLambda(lambda));
    }
    let y2 = (1.0 + lambda) / (1.0 - lambda);
    ns.iter()
        .map(|&n| {
            if n < 1 {
                return Err(WassError::InvalidOrder(n));
            }
            let q = Wass1D::new(n, lambda)?;
            let y1 = hinv_norm2_bound(&HadamardInverse::new(&q));
            let diff = if y1.is_log {
                // ln(y1 − y2) = ln y1 + ln(1 − y2·e^{−ln y1})
                LogValue::log(y1.value + (-y2 * (-y1.value).exp()).ln_1p())
            } else {
                LogValue::linear(y1.value - y2)
            };
            Ok(Table1Row { n, y1, y2, diff })
        })
        .collect()
}

/// CSV with header `n,y1,y2,diff`; values within 1e−9 of an integer print
/// as integers so the published table reproduces digit-for-digit.
pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut s = String::from("n,y1,y2,diff\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            r.y1.render(),
            fmt_integerish(r.y2),
            r.diff.render()
        ));
    }
    s
}

/// Hadamard-inverse norms of the 2D kernel: the Kronecker product of
/// Hadamard inverses is the Hadamard inverse of the Kronecker product, so
/// both quantities are products of the 1D closed forms.
#[derive(Debug, Clone, Copy)]
pub struct Hinv2DNorms {
    pub norm1_exact: LogValue,
    pub norm2_bound: LogValue,
}

pub fn hinv_2d_norms(q: &Wass2D) -> Hinv2DNorms {
    let h1 = HadamardInverse::new(q.factor1());
    let h2 = HadamardInverse::new(q.factor2());
    let combine = |a: LogValue, b: LogValue| {
        if a.is_log || b.is_log {
            LogValue::log(a.ln() + b.ln())
        } else {
            LogValue::linear(a.value * b.value)
        }
    };
    Hinv2DNorms {
        norm1_exact: combine(hinv_norm1_exact(&h1), hinv_norm1_exact(&h2)),
        norm2_bound: combine(hinv_norm2_bound(&h1), hinv_norm2_bound(&h2)),
    }
}

/// Max row 2-norm, used for the entrywise-product norm inequality
/// `‖A ∘ B‖₂ ≤ r₁(A) c₁(B)`.
pub fn max_row_norm2(a: &DenseMat) -> f64 {
    let n = a.order();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a.get(i, j) * a.get(i, j))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Max column 2-norm, the partner of [`max_row_norm2`].
pub fn max_col_norm2(a: &DenseMat) -> f64 {
    max_row_norm2(&a.transpose())
}

/// Default-capped convenience wrapper around [`hadamard_split`].
pub fn hadamard_split_default(q: &Wass1D) -> Result<(DenseMat, DenseMat), WassError> {
    hadamard_split(q, DEFAULT_DENSE_LIMIT)
}
