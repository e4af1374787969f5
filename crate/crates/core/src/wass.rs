//! Implicit representations of the kernel matrices `Q(n, λ)` with entries
//! `λ^|i−j|` and their two-dimensional Kronecker form, with O(n) matvec,
//! solve, factorization, and determinant.
//!
//! The O(n) routines rest on two identities. Writing `N` for the lower
//! shift matrix and `D̂_λ = diag(1−λ², …, 1−λ², 1)`:
//!
//! ```text
//! Q = (I−λN)⁻¹ + (I−λNᵀ)⁻¹ − I          (two-sweep matvec)
//! (I−λNᵀ) Q (I−λN) = D̂_λ                (bidiagonal factorization)
//! Q⁻¹ = (I−λN) D̂_λ⁻¹ (I−λNᵀ)           (O(n) solve, tridiagonal inverse)
//! ```
//!
//! Indexing is 1-based in the formulas above and 0-based in code. The 2D
//! vectorization is fixed so that consecutive vector entries vary the
//! first-factor index fastest, matching the Kronecker order `Q₂ ⊗ Q₁`.

use crate::config::DEFAULT_DENSE_LIMIT;
use crate::dense::DenseMat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WassError {
    #[error("matrix order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("decay parameter must satisfy 0 < lambda < 1, got {0}")]
    InvalidLambda(f64),
    #[error("vector length {len} does not match matrix order {order}")]
    LengthMismatch { order: usize, len: usize },
    #[error("order {order} exceeds the dense materialization limit {limit}")]
    DenseLimit { order: usize, limit: usize },
}

/// Which bidiagonal factor an operation refers to: the unit lower
/// bidiagonal `I − λN` or its transpose `I − λNᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BidiagSide {
    Lower,
    Upper,
}

/// One-dimensional kernel matrix, fully determined by its order and decay
/// parameter. Entry `(i, j)` is `λ^|i−j|`: symmetric, Toeplitz, entrywise
/// positive, unit diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wass1D {
    n: usize,
    lambda: f64,
}

impl Wass1D {
    /// Validates `n ≥ 1` and `λ ∈ (0, 1)` (both bounds strict: the
    /// factorization diagonal `1−λ²` must stay positive).
    pub fn new(n: usize, lambda: f64) -> Result<Self, WassError> {
        if n < 1 {
            return Err(WassError::InvalidOrder(n));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(WassError::InvalidLambda(lambda));
        }
        Ok(Wass1D { n, lambda })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Entry at 0-based (i, j).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.lambda.powi(i.abs_diff(j) as i32)
    }

    /// Row `i` (0-based) of the dense matrix, built by running products
    /// outward from the unit diagonal rather than pow-per-entry.
    pub fn power_row(&self, i: usize) -> Vec<f64> {
        let mut row = vec![0.0; self.n];
        row[i] = 1.0;
        let mut p = 1.0;
        for j in (0..i).rev() {
            p *= self.lambda;
            row[j] = p;
        }
        p = 1.0;
        for j in (i + 1)..self.n {
            p *= self.lambda;
            row[j] = p;
        }
        row
    }

    /// Dense materialization under the default size cap.
    pub fn materialize(&self) -> Result<DenseMat, WassError> {
        self.materialize_capped(DEFAULT_DENSE_LIMIT)
    }

    pub fn materialize_capped(&self, limit: usize) -> Result<DenseMat, WassError> {
        if self.n > limit {
            return Err(WassError::DenseLimit {
                order: self.n,
                limit,
            });
        }
        let mut m = DenseMat::zeros(self.n);
        for i in 0..self.n {
            for (j, v) in self.power_row(i).into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Dense strictly lower factor `L` with `Q = I + L + Lᵀ`.
    pub fn lower_factor_capped(&self, limit: usize) -> Result<DenseMat, WassError> {
        if self.n > limit {
            return Err(WassError::DenseLimit {
                order: self.n,
                limit,
            });
        }
        let mut m = DenseMat::zeros(self.n);
        for i in 0..self.n {
            let row = self.power_row(i);
            for j in 0..i {
                m.set(i, j, row[j]);
            }
        }
        Ok(m)
    }

    /// `Q x` in O(n) by a forward and a backward geometric sweep:
    /// `f_i = λ f_{i−1} + x_i`, `b_i = λ b_{i+1} + x_i`, `y_i = f_i + b_i − x_i`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, WassError> {
        self.check_len(x)?;
        let n = self.n;
        let lambda = self.lambda;
        let mut y = vec![0.0; n];
        let mut f = 0.0;
        for i in 0..n {
            f = lambda * f + x[i];
            y[i] = f;
        }
        let mut b = 0.0;
        for i in (0..n).rev() {
            b = lambda * b + x[i];
            y[i] += b - x[i];
        }
        Ok(y)
    }

    /// `W x` for the distance-weighted kernel `W_ij = |i−j| λ^|i−j|`,
    /// in O(n) by differentiated geometric sweeps. Used by the transport
    /// objective, which needs plan-weighted distance sums without the
    /// dense kernel.
    pub fn weighted_matvec(&self, x: &[f64]) -> Result<Vec<f64>, WassError> {
        self.check_len(x)?;
        let n = self.n;
        let lambda = self.lambda;
        let mut y = vec![0.0; n];
        // Forward: g_i = Σ_{j≤i} (i−j) λ^{i−j} x_j via g_i = λ(g_{i−1} + f_{i−1}).
        let mut f = 0.0;
        let mut g = 0.0;
        for i in 0..n {
            g = lambda * (g + f);
            f = lambda * f + x[i];
            y[i] = g;
        }
        // Backward mirror.
        let mut fb = 0.0;
        let mut gb = 0.0;
        for i in (0..n).rev() {
            gb = lambda * (gb + fb);
            fb = lambda * fb + x[i];
            y[i] += gb;
        }
        Ok(y)
    }

    /// Solves `Q x = b` in O(n) through the bidiagonal factorization:
    /// `x = (I−λN) · D̂⁻¹ · (I−λNᵀ) · b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, WassError> {
        self.check_len(b)?;
        let n = self.n;
        let lambda = self.lambda;
        let factor = self.factor();
        let mut x = vec![0.0; n];
        // u = (I−λNᵀ) b
        for i in 0..n {
            x[i] = b[i] - if i + 1 < n { lambda * b[i + 1] } else { 0.0 };
        }
        // v = D̂⁻¹ u
        for i in 0..n {
            x[i] /= factor.dhat(i);
        }
        // x = (I−λN) v, in place from the bottom up
        for i in (1..n).rev() {
            x[i] -= lambda * x[i - 1];
        }
        Ok(x)
    }

    /// Applies `(I−λN)⁻¹` (forward substitution) or `(I−λNᵀ)⁻¹` (backward
    /// substitution) to `x`. Equivalent to multiplying by the explicit
    /// triangular inverse with entries `λ^{i−j}` on and below the diagonal.
    pub fn apply_bidiag_inverse(&self, side: BidiagSide, x: &[f64]) -> Result<Vec<f64>, WassError> {
        self.check_len(x)?;
        Ok(apply_bidiag_inverse(self.lambda, side, x))
    }

    /// The factorization `(I−λNᵀ) Q (I−λN) = D̂_λ`.
    pub fn factor(&self) -> BidiagFactor {
        BidiagFactor {
            n: self.n,
            lambda: self.lambda,
        }
    }

    /// Closed-form symmetric tridiagonal `Q⁻¹`, built in O(n).
    pub fn inverse_tridiagonal(&self) -> TridiagInverse {
        let n = self.n;
        let lambda = self.lambda;
        if n == 1 {
            return TridiagInverse {
                diag: vec![1.0],
                offdiag: vec![],
            };
        }
        let d = 1.0 - lambda * lambda;
        let mut diag = vec![(1.0 + lambda * lambda) / d; n];
        diag[0] = 1.0 / d;
        diag[n - 1] = 1.0 / d;
        TridiagInverse {
            diag,
            offdiag: vec![-lambda / d; n - 1],
        }
    }

    /// `ln det Q = (n−1) ln(1−λ²)`.
    pub fn logdet(&self) -> f64 {
        (self.n as f64 - 1.0) * (1.0 - self.lambda * self.lambda).ln()
    }

    fn check_len(&self, x: &[f64]) -> Result<(), WassError> {
        if x.len() != self.n {
            return Err(WassError::LengthMismatch {
                order: self.n,
                len: x.len(),
            });
        }
        Ok(())
    }
}

/// Standalone bidiagonal-inverse application, usable without a full kernel
/// value: forward substitution with `y_i = x_i + λ y_{i−1}` (lower) or its
/// reversed mirror (upper).
pub fn apply_bidiag_inverse(lambda: f64, side: BidiagSide, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut y = vec![0.0; n];
    match side {
        BidiagSide::Lower => {
            let mut acc = 0.0;
            for i in 0..n {
                acc = x[i] + lambda * acc;
                y[i] = acc;
            }
        }
        BidiagSide::Upper => {
            let mut acc = 0.0;
            for i in (0..n).rev() {
                acc = x[i] + lambda * acc;
                y[i] = acc;
            }
        }
    }
    y
}

/// The bidiagonal factorization `(I−λNᵀ) Q (I−λN) = D̂_λ` with
/// `D̂ = diag(1−λ², …, 1−λ², 1)`.
#[derive(Debug, Clone, Copy)]
pub struct BidiagFactor {
    n: usize,
    lambda: f64,
}

impl BidiagFactor {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Diagonal entry of `D̂_λ` at 0-based index `i`: `1−λ²` except for the
    /// final entry, which is 1. For n = 1 the single entry is 1.
    pub fn dhat(&self, i: usize) -> f64 {
        if i + 1 < self.n {
            1.0 - self.lambda * self.lambda
        } else {
            1.0
        }
    }

    /// Dense `I − λN` (unit lower bidiagonal).
    pub fn lower_bidiagonal(&self) -> DenseMat {
        let lambda = self.lambda;
        DenseMat::from_fn(self.n, |i, j| {
            if i == j {
                1.0
            } else if i == j + 1 {
                -lambda
            } else {
                0.0
            }
        })
    }

    /// Dense `D̂_λ`.
    pub fn dhat_dense(&self) -> DenseMat {
        let n = self.n;
        let mut m = DenseMat::zeros(n);
        for i in 0..n {
            m.set(i, i, self.dhat(i));
        }
        m
    }
}

/// Symmetric tridiagonal matrix holding `Q⁻¹` in closed form:
/// first and last diagonal entries `1/(1−λ²)`, interior entries
/// `(1+λ²)/(1−λ²)`, off-diagonal `−λ/(1−λ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagInverse {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagInverse {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.offdiag[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    pub fn materialize(&self) -> DenseMat {
        let n = self.order();
        let mut m = DenseMat::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
            if i + 1 < n {
                m.set(i, i + 1, self.offdiag[i]);
                m.set(i + 1, i, self.offdiag[i]);
            }
        }
        m
    }

    /// Exact `‖Q⁻¹‖₁` from the closed-form entries: 1 for n = 1,
    /// `1/(1−λ)` for n = 2, `(1+λ)/(1−λ)` for n ≥ 3.
    pub fn norm1(&self) -> f64 {
        let n = self.order();
        (0..n)
            .map(|j| {
                let mut s = self.diag[j].abs();
                if j > 0 {
                    s += self.offdiag[j - 1].abs();
                }
                if j + 1 < n {
                    s += self.offdiag[j].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }
}

/// Two-dimensional kernel matrix `Q = Q₂ ⊗ Q₁` of order `n·m`, stored
/// implicitly as its two factors. Entry `((i₂,i₁),(j₂,j₁))` is
/// `λ₂^|i₂−j₂| · λ₁^|i₁−j₁|`, with vectors laid out so index `i₁` (the
/// `Q₁` axis, order n) varies fastest: `k = i₁ + n·i₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wass2D {
    q1: Wass1D,
    q2: Wass1D,
}

impl Wass2D {
    pub fn new(q1: Wass1D, q2: Wass1D) -> Self {
        Wass2D { q1, q2 }
    }

    pub fn factor1(&self) -> &Wass1D {
        &self.q1
    }

    pub fn factor2(&self) -> &Wass1D {
        &self.q2
    }

    /// Total order `n·m`.
    pub fn order(&self) -> usize {
        self.q1.order() * self.q2.order()
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let n = self.q1.order();
        let (i1, i2) = (row % n, row / n);
        let (j1, j2) = (col % n, col / n);
        self.q2.entry(i2, j2) * self.q1.entry(i1, j1)
    }

    /// `(Q₂ ⊗ Q₁) x` in O(n·m): applies `Q₁` along the fast axis and `Q₂`
    /// along the slow axis.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, WassError> {
        self.apply(x, |q, v| q.matvec(v))
    }

    /// Solves `(Q₂ ⊗ Q₁) x = b` via `Q⁻¹ = Q₂⁻¹ ⊗ Q₁⁻¹`, one 1D solve per
    /// axis line.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, WassError> {
        self.apply(b, |q, v| q.solve(v))
    }

    /// Distance-weighted application along the fast axis only:
    /// `(Q₂ ⊗ W₁) x` with `W₁(i,j) = |i−j| λ₁^|i−j|`.
    pub fn weighted_matvec_axis1(&self, x: &[f64]) -> Result<Vec<f64>, WassError> {
        self.apply_mixed(x, |q, v| q.weighted_matvec(v), |q, v| q.matvec(v))
    }

    /// `(W₂ ⊗ Q₁) x`, the slow-axis mirror of [`Self::weighted_matvec_axis1`].
    pub fn weighted_matvec_axis2(&self, x: &[f64]) -> Result<Vec<f64>, WassError> {
        self.apply_mixed(x, |q, v| q.matvec(v), |q, v| q.weighted_matvec(v))
    }

    fn apply(
        &self,
        x: &[f64],
        op: impl Fn(&Wass1D, &[f64]) -> Result<Vec<f64>, WassError>,
    ) -> Result<Vec<f64>, WassError> {
        self.apply_mixed(x, &op, &op)
    }

    fn apply_mixed(
        &self,
        x: &[f64],
        op1: impl Fn(&Wass1D, &[f64]) -> Result<Vec<f64>, WassError>,
        op2: impl Fn(&Wass1D, &[f64]) -> Result<Vec<f64>, WassError>,
    ) -> Result<Vec<f64>, WassError> {
        let n = self.q1.order();
        let m = self.q2.order();
        if x.len() != n * m {
            return Err(WassError::LengthMismatch {
                order: n * m,
                len: x.len(),
            });
        }
        let mut out = vec![0.0; n * m];
        // Fast axis: each contiguous block of n entries is one Q₁ line.
        for i2 in 0..m {
            let block = &x[i2 * n..(i2 + 1) * n];
            let y = op1(&self.q1, block)?;
            out[i2 * n..(i2 + 1) * n].copy_from_slice(&y);
        }
        // Slow axis: strided lines across blocks.
        let mut line = vec![0.0; m];
        for i1 in 0..n {
            for i2 in 0..m {
                line[i2] = out[i2 * n + i1];
            }
            let y = op2(&self.q2, &line)?;
            for i2 in 0..m {
                out[i2 * n + i1] = y[i2];
            }
        }
        Ok(out)
    }

    /// `ln det(Q₂ ⊗ Q₁) = m·ln det Q₁ + n·ln det Q₂`, which expands to
    /// `m(n−1)ln(1−λ₁²) + n(m−1)ln(1−λ₂²)`.
    pub fn logdet(&self) -> f64 {
        self.q2.order() as f64 * self.q1.logdet() + self.q1.order() as f64 * self.q2.logdet()
    }

    pub fn materialize_capped(&self, limit: usize) -> Result<DenseMat, WassError> {
        let order = self.order();
        if order > limit {
            return Err(WassError::DenseLimit { order, limit });
        }
        let d1 = self.q1.materialize_capped(limit)?;
        let d2 = self.q2.materialize_capped(limit)?;
        let n = self.q1.order();
        Ok(DenseMat::from_fn(order, |row, col| {
            d2.get(row / n, col / n) * d1.get(row % n, col % n)
        }))
    }
}
