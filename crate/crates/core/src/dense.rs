//! Dense brute-force linear algebra used as the reference for every
//! structured operation and every certified bound.
//!
//! Everything here is deliberately naive: Gaussian elimination with partial
//! pivoting, cyclic Jacobi for symmetric eigenvalues, and the spectral norm
//! via an eigensolve of `AᵀA`. No performance claims are made; the point is
//! an independent computation path at desk scale (n ≤ a few hundred).

use thiserror::Error;

/// Pivot magnitudes below this are treated as singular. Inputs in this
/// crate are unit-scaled, so the threshold only guards misuse.
const PIVOT_EPS: f64 = 1e-14;

/// Off-diagonal Frobenius mass at which Jacobi iteration stops, relative
/// to the input's Frobenius norm (absolute for unit-scale inputs).
const JACOBI_OFF_EPS: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum DenseError {
    #[error("matrix is numerically singular (pivot {pivot:.3e} at column {col})")]
    Singular { pivot: f64, col: usize },
    #[error("matrix is not symmetric (max asymmetry {max_asym:.3e})")]
    NotSymmetric { max_asym: f64 },
    #[error("dimension mismatch: matrix order {order}, vector length {len}")]
    DimensionMismatch { order: usize, len: usize },
    #[error("Jacobi iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("determinant is not positive; log-determinant undefined")]
    NonPositiveDeterminant,
}

/// Square matrix of reals in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat {
    order: usize,
    entries: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be positive");
        DenseMat {
            order,
            entries: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = DenseMat::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a row-major slice of length `order²`.
    pub fn from_row_major(order: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), order * order, "entry count must be order²");
        assert!(
            entries.iter().all(|v| v.is_finite()),
            "entries must be finite"
        );
        DenseMat { order, entries }
    }

    /// Builds entry-by-entry from a function of (row, col), 0-based.
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DenseMat::zeros(order);
        for i in 0..order {
            for j in 0..order {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> DenseMat {
        DenseMat::from_fn(self.order, |i, j| self.get(j, i))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn matmul(&self, other: &DenseMat) -> DenseMat {
        assert_eq!(self.order, other.order);
        let n = self.order;
        let mut out = DenseMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        out
    }

    /// Leading principal submatrix of the given order.
    pub fn leading_principal(&self, k: usize) -> DenseMat {
        assert!(k >= 1 && k <= self.order);
        DenseMat::from_fn(k, |i, j| self.get(i, j))
    }

    /// Largest |entry| of `self − other`.
    pub fn max_abs_diff(&self, other: &DenseMat) -> f64 {
        assert_eq!(self.order, other.order);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.order {
            for j in (i + 1)..self.order {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Which operator norm [`dense_norm`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Max absolute column sum.
    One,
    /// Spectral norm (largest singular value, via an eigensolve of `AᵀA`).
    Two,
    /// Max absolute row sum.
    Inf,
}

/// Eigenvalues of a symmetric matrix, ascending, plus the sweep count the
/// Jacobi iteration needed.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub iterations: usize,
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &DenseMat, b: &[f64]) -> Result<Vec<f64>, DenseError> {
    let n = a.order();
    if b.len() != n {
        return Err(DenseError::DimensionMismatch {
            order: n,
            len: b.len(),
        });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m.get(r, col)))
            .max_by(|(_, p), (_, q)| p.abs().total_cmp(&q.abs()))
            .expect("non-empty column");
        if pivot.abs() < PIVOT_EPS {
            return Err(DenseError::Singular {
                pivot: pivot.abs(),
                col,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
            x.swap(col, pivot_row);
        }
        for r in (col + 1)..n {
            let factor = m.get(r, col) / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m.set(r, j, m.get(r, j) - factor * m.get(col, j));
            }
            x[r] -= factor * x[col];
        }
    }
    for col in (0..n).rev() {
        x[col] /= m.get(col, col);
        for r in 0..col {
            x[r] -= m.get(r, col) * x[col];
        }
    }
    Ok(x)
}

/// Inverse by column-by-column solves against the identity.
pub fn dense_inverse(a: &DenseMat) -> Result<DenseMat, DenseError> {
    let n = a.order();
    let mut inv = DenseMat::zeros(n);
    let mut e = vec![0.0; n];
    for col in 0..n {
        e[col] = 1.0;
        let x = dense_solve(a, &e)?;
        e[col] = 0.0;
        for row in 0..n {
            inv.set(row, col, x[row]);
        }
    }
    Ok(inv)
}

/// Natural log of the determinant; errors if the determinant is not
/// strictly positive.
pub fn dense_logdet(a: &DenseMat) -> Result<f64, DenseError> {
    let n = a.order();
    let mut m = a.clone();
    let mut sign = 1.0f64;
    let mut logdet = 0.0f64;
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, m.get(r, col)))
            .max_by(|(_, p), (_, q)| p.abs().total_cmp(&q.abs()))
            .expect("non-empty column");
        if pivot.abs() < PIVOT_EPS {
            return Err(DenseError::Singular {
                pivot: pivot.abs(),
                col,
            });
        }
        if pivot_row != col {
            sign = -sign;
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
        }
        sign *= pivot.signum();
        logdet += pivot.abs().ln();
        for r in (col + 1)..n {
            let factor = m.get(r, col) / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m.set(r, j, m.get(r, j) - factor * m.get(col, j));
            }
        }
    }
    if sign <= 0.0 {
        return Err(DenseError::NonPositiveDeterminant);
    }
    Ok(logdet)
}

/// Max column sum, spectral norm, or max row sum.
pub fn dense_norm(a: &DenseMat, which: NormKind) -> f64 {
    let n = a.order();
    match which {
        NormKind::One => (0..n)
            .map(|j| (0..n).map(|i| a.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Inf => (0..n)
            .map(|i| (0..n).map(|j| a.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Two => {
            // Largest singular value; symmetry is not required.
            let ata = a.transpose().matmul(a);
            let eigs = jacobi_eigenvalues(&ata).expect("AᵀA is symmetric by construction");
            eigs.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
        }
    }
}

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
///
/// Rejects inputs whose asymmetry exceeds 1e−12.
pub fn dense_eigs_symmetric(a: &DenseMat) -> Result<EigenResult, DenseError> {
    let asym = a.max_asymmetry();
    if asym > 1e-12 {
        return Err(DenseError::NotSymmetric { max_asym: asym });
    }
    jacobi_eigenvalues(a)
}

/// Spectral radius of a symmetric matrix (largest |eigenvalue|).
pub fn spectral_radius_symmetric(a: &DenseMat) -> Result<f64, DenseError> {
    let eig = dense_eigs_symmetric(a)?;
    Ok(eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

fn off_diagonal_frobenius(a: &DenseMat) -> f64 {
    let n = a.order();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j) * a.get(i, j);
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi on the full matrix; also accumulates eigenvectors so the
/// reconstruction check in the tests can run. Public API exposes values
/// only.
fn jacobi_full(a: &DenseMat) -> Result<(Vec<f64>, DenseMat, usize), DenseError> {
    let n = a.order();
    let mut m = a.clone();
    let mut v = DenseMat::identity(n);
    if n == 1 {
        return Ok((vec![m.get(0, 0)], v, 0));
    }
    let scale = a
        .entries()
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let threshold = JACOBI_OFF_EPS * scale;
    for sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_frobenius(&m) < threshold {
            let mut values: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
            // Sort eigenvalues ascending, permuting vectors alongside.
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&p, &q| values[p].total_cmp(&values[q]));
            values.sort_by(f64::total_cmp);
            let vs = DenseMat::from_fn(n, |i, j| v.get(i, idx[j]));
            return Ok((values, vs, sweep));
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Apply the rotation G(p,q) on both sides: m ← GᵀmG.
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    Err(DenseError::NoConvergence(JACOBI_MAX_SWEEPS))
}

fn jacobi_eigenvalues(a: &DenseMat) -> Result<EigenResult, DenseError> {
    let (values, _, iterations) = jacobi_full(a)?;
    Ok(EigenResult { values, iterations })
}
