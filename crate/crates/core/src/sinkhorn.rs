//! Entropy-regularized Wasserstein-1 distance between discrete
//! distributions on uniform 1D and 2D grids, solved by alternating
//! diagonal scaling against the structured kernel.
//!
//! The kernel is never materialized: with `λ = e^{−h/ε}` its rows are the
//! geometric family handled by [`Wass1D`]/[`Wass2D`], so every kernel
//! application costs O(n). The iteration is the standard scaling scheme
//! with a fixed, documented update order so an independent dense-kernel
//! run produces bit-comparable iterates:
//!
//! ```text
//! b ← 1;  repeat:  a ← u ⊘ (K b);  b ← v ⊘ (K a)
//! ```
//!
//! stopping when the larger of the two marginal ∞-norm residuals drops
//! below `tol`. Zero-mass cells scale to zero (`0/x = 0`) and contribute
//! zero entropy (`0·ln 0 = 0`).
//!
//! For 2D problems the grid spacing `h` and hence `λ` are shared by both
//! axes; diagonal scaling against `Q₂ ⊗ Q₁` then solves the transport
//! problem with the separable ground cost `h(|i₁−j₁| + |i₂−j₂|)`.

use crate::config::DEFAULT_DENSE_LIMIT;
use crate::emit::fmt_f64;
use crate::wass::{Wass1D, Wass2D, WassError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SinkhornError {
    #[error("grid spacing and regularization must be positive, got h={h}, epsilon={epsilon}")]
    Domain { h: f64, epsilon: f64 },
    #[error("source and target shapes differ: {0:?} vs {1:?}")]
    ShapeMismatch(Shape, Shape),
    #[error(
        "scaling underflowed to zero at index {index} (iteration {iteration}); \
         a larger epsilon keeps the kernel better conditioned"
    )]
    Underflow { index: usize, iteration: usize },
    #[error(transparent)]
    Kernel(#[from] WassError),
}

#[derive(Debug, Error)]
pub enum DistError {
    #[error("line {line}: cannot parse {token:?} as a number")]
    Parse { line: usize, token: String },
    #[error("line {line}: negative mass {value}")]
    Negative { line: usize, value: f64 },
    #[error("line {line}: expected {expected} comma-separated values, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("distribution has no entries")]
    Empty,
    #[error("all entries are zero; total mass must be positive")]
    AllZeros,
}

/// Grid shape of a distribution: a 1D line of `n` cells or an `n × m`
/// grid laid out with the first axis varying fastest (matching the
/// kernel's vectorization).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    OneD(usize),
    TwoD { n: usize, m: usize },
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::OneD(n) => n,
            Shape::TwoD { n, m } => n * m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Nonnegative mass vector normalized to total 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    mass: Vec<f64>,
    shape: Shape,
    /// Total mass of the raw input before normalization.
    original_total: f64,
}

impl DiscreteDist {
    pub fn new(mass: Vec<f64>, shape: Shape) -> Result<Self, DistError> {
        assert_eq!(mass.len(), shape.len(), "mass length must match shape");
        if mass.is_empty() {
            return Err(DistError::Empty);
        }
        for (i, &v) in mass.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(DistError::Negative {
                    line: i + 1,
                    value: v,
                });
            }
        }
        let total: f64 = mass.iter().sum();
        if total <= 0.0 {
            return Err(DistError::AllZeros);
        }
        let mass = mass.into_iter().map(|v| v / total).collect();
        Ok(DiscreteDist {
            mass,
            shape,
            original_total: total,
        })
    }

    pub fn point_mass(index: usize, shape: Shape) -> Self {
        let mut mass = vec![0.0; shape.len()];
        mass[index] = 1.0;
        DiscreteDist {
            mass,
            shape,
            original_total: 1.0,
        }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn original_total(&self) -> f64 {
        self.original_total
    }

    /// Index of the single positive cell, when the distribution is a
    /// point mass.
    fn point_support(&self) -> Option<usize> {
        let mut found = None;
        for (i, &v) in self.mass.iter().enumerate() {
            if v > 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

/// Parses a 1D distribution: one nonnegative decimal per line, UTF-8,
/// blank lines and lines starting with `#` ignored.
pub fn parse_distribution_1d(text: &str) -> Result<DiscreteDist, DistError> {
    let mut mass = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| DistError::Parse {
            line: idx + 1,
            token: line.to_string(),
        })?;
        if v < 0.0 || !v.is_finite() {
            return Err(DistError::Negative {
                line: idx + 1,
                value: v,
            });
        }
        mass.push(v);
        lines.push(idx + 1);
    }
    if mass.is_empty() {
        return Err(DistError::Empty);
    }
    let n = mass.len();
    DiscreteDist::new(mass, Shape::OneD(n))
}

/// Parses a 2D distribution: comma-separated rows, one grid row per line.
/// Rows map to the slow axis; columns (the fast axis) must agree across
/// rows.
pub fn parse_distribution_2d(text: &str) -> Result<DiscreteDist, DistError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split(',') {
            let token = token.trim();
            let v: f64 = token.parse().map_err(|_| DistError::Parse {
                line: idx + 1,
                token: token.to_string(),
            })?;
            if v < 0.0 || !v.is_finite() {
                return Err(DistError::Negative {
                    line: idx + 1,
                    value: v,
                });
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(DistError::RaggedRow {
                    line: idx + 1,
                    expected: w,
                    found: row.len(),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DistError::Empty);
    }
    let n = width.unwrap();
    let m = rows.len();
    let mass: Vec<f64> = rows.into_iter().flatten().collect();
    DiscreteDist::new(mass, Shape::TwoD { n, m })
}

/// `λ = e^{−h/ε}`, guaranteed in (0, 1) for positive inputs.
pub fn lambda_from_grid(h: f64, epsilon: f64) -> Result<f64, SinkhornError> {
    if !(h > 0.0 && epsilon > 0.0) || !h.is_finite() || !epsilon.is_finite() {
        return Err(SinkhornError::Domain { h, epsilon });
    }
    Ok((-h / epsilon).exp())
}

#[derive(Debug, Clone)]
enum Kernel {
    One(Wass1D),
    Two(Wass2D),
}

impl Kernel {
    fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, WassError> {
        match self {
            Kernel::One(q) => q.matvec(x),
            Kernel::Two(q) => q.matvec(x),
        }
    }
}

/// One transport problem: grid spacing, regularization, the implied decay
/// parameter, and the two distributions. The ground cost is `|i−j|·h`
/// (separable per axis in 2D) and is never materialized.
#[derive(Debug, Clone)]
pub struct SinkhornProblem {
    h: f64,
    epsilon: f64,
    lambda: f64,
    kernel: Kernel,
    u: DiscreteDist,
    v: DiscreteDist,
}

impl SinkhornProblem {
    pub fn new(
        h: f64,
        epsilon: f64,
        u: DiscreteDist,
        v: DiscreteDist,
    ) -> Result<Self, SinkhornError> {
        let lambda = lambda_from_grid(h, epsilon)?;
        if u.shape() != v.shape() {
            return Err(SinkhornError::ShapeMismatch(u.shape(), v.shape()));
        }
        let kernel = match u.shape() {
            Shape::OneD(n) => Kernel::One(Wass1D::new(n, lambda)?),
            Shape::TwoD { n, m } => Kernel::Two(Wass2D::new(
                Wass1D::new(n, lambda)?,
                Wass1D::new(m, lambda)?,
            )),
        };
        Ok(SinkhornProblem {
            h,
            epsilon,
            lambda,
            kernel,
            u,
            v,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn source(&self) -> &DiscreteDist {
        &self.u
    }

    pub fn target(&self) -> &DiscreteDist {
        &self.v
    }

    fn size(&self) -> usize {
        self.u.shape().len()
    }

    /// Ground-cost between two flat indices.
    fn cost(&self, i: usize, j: usize) -> f64 {
        match self.u.shape() {
            Shape::OneD(_) => i.abs_diff(j) as f64 * self.h,
            Shape::TwoD { n, .. } => {
                let (i1, i2) = (i % n, i / n);
                let (j1, j2) = (j % n, j / n);
                (i1.abs_diff(j1) as f64 + i2.abs_diff(j2) as f64) * self.h
            }
        }
    }

    /// Kernel entry between two flat indices.
    fn kernel_entry(&self, i: usize, j: usize) -> f64 {
        match &self.kernel {
            Kernel::One(q) => q.entry(i, j),
            Kernel::Two(q) => q.entry(i, j),
        }
    }
}

/// The alternating-scaling state, stepped one full (a, b) update at a
/// time. Exposed so reference implementations can be compared iterate by
/// iterate.
#[derive(Debug)]
pub struct SinkhornSolver<'p> {
    problem: &'p SinkhornProblem,
    a: Vec<f64>,
    b: Vec<f64>,
    kb: Vec<f64>,
    ka: Vec<f64>,
    iterations: usize,
}

impl<'p> SinkhornSolver<'p> {
    pub fn new(problem: &'p SinkhornProblem) -> Result<Self, SinkhornError> {
        let size = problem.size();
        let b = vec![1.0; size];
        let kb = problem.kernel.matvec(&b)?;
        Ok(SinkhornSolver {
            problem,
            a: vec![0.0; size],
            b,
            kb,
            ka: vec![0.0; size],
            iterations: 0,
        })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// One `a`-then-`b` update; returns the max marginal ∞-norm residual
    /// evaluated with the freshly updated scalings.
    pub fn step(&mut self) -> Result<f64, SinkhornError> {
        self.iterations += 1;
        let u = self.problem.u.mass();
        let v = self.problem.v.mass();

        for i in 0..self.a.len() {
            self.a[i] = if u[i] == 0.0 { 0.0 } else { u[i] / self.kb[i] };
            if u[i] > 0.0 && (self.a[i] == 0.0 || !self.a[i].is_finite()) {
                return Err(SinkhornError::Underflow {
                    index: i,
                    iteration: self.iterations,
                });
            }
        }
        self.ka = self.problem.kernel.matvec(&self.a)?;
        for j in 0..self.b.len() {
            self.b[j] = if v[j] == 0.0 { 0.0 } else { v[j] / self.ka[j] };
            if v[j] > 0.0 && (self.b[j] == 0.0 || !self.b[j].is_finite()) {
                return Err(SinkhornError::Underflow {
                    index: j,
                    iteration: self.iterations,
                });
            }
        }
        self.kb = self.problem.kernel.matvec(&self.b)?;

        let row_err = self
            .a
            .iter()
            .zip(&self.kb)
            .zip(u)
            .map(|((ai, kbi), ui)| (ai * kbi - ui).abs())
            .fold(0.0, f64::max);
        let col_err = self
            .b
            .iter()
            .zip(&self.ka)
            .zip(v)
            .map(|((bj, kaj), vj)| (bj * kaj - vj).abs())
            .fold(0.0, f64::max);
        Ok(row_err.max(col_err))
    }
}

/// Converged scalings plus the decomposed objective value.
#[derive(Debug, Clone)]
pub struct SinkhornResult {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Regularized objective: `transport_cost + ε·entropy_term`.
    pub distance: f64,
    /// `Σ γ_ij C_ij` with `γ = diag(a) K diag(b)`.
    pub transport_cost: f64,
    /// `Σ γ_ij ln γ_ij` with the `0·ln 0 = 0` convention.
    pub entropy_term: f64,
    pub iterations: usize,
    pub marginal_error: f64,
    pub lambda: f64,
    pub converged: bool,
}

impl SinkhornResult {
    /// JSON with the stable field set
    /// `{"distance","transport_cost","entropy_term","iterations",
    ///   "marginal_error","lambda"}`.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"distance\":{},\"transport_cost\":{},\"entropy_term\":{},\"iterations\":{},\"marginal_error\":{},\"lambda\":{}}}",
            fmt_f64(self.distance),
            fmt_f64(self.transport_cost),
            fmt_f64(self.entropy_term),
            self.iterations,
            fmt_f64(self.marginal_error),
            fmt_f64(self.lambda)
        )
    }
}

/// Runs the scaling iteration to the given marginal tolerance. A run that
/// exhausts `max_iter` returns its best iterate with `converged = false`
/// rather than an error; underflow of a scaling aborts with a suggestion
/// to retry at larger ε.
pub fn solve(
    problem: &SinkhornProblem,
    tol: f64,
    max_iter: usize,
) -> Result<SinkhornResult, SinkhornError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut solver = SinkhornSolver::new(problem)?;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_iter {
        residual = solver.step()?;
        if residual < tol {
            converged = true;
            break;
        }
    }
    let (transport_cost, entropy_term) = objective_terms(problem, &solver.a, &solver.b);
    Ok(SinkhornResult {
        distance: transport_cost + problem.epsilon * entropy_term,
        transport_cost,
        entropy_term,
        iterations: solver.iterations,
        marginal_error: residual,
        lambda: problem.lambda,
        a: solver.a,
        b: solver.b,
        converged,
    })
}

/// Recomputes `Σ γ_ij C_ij` for a finished run.
pub fn transport_cost(problem: &SinkhornProblem, result: &SinkhornResult) -> f64 {
    objective_terms(problem, &result.a, &result.b).0
}

/// Both objective pieces. When either marginal is a point mass the plan
/// is fully determined by feasibility (the positive row or column must
/// carry the whole opposite marginal), so the objective is evaluated on
/// that exact plan; otherwise it is evaluated from the scalings, densely
/// up to the dense limit and through the O(n) weighted sweeps above it.
fn objective_terms(problem: &SinkhornProblem, a: &[f64], b: &[f64]) -> (f64, f64) {
    let u = problem.u.mass();
    let v = problem.v.mass();
    if let Some(i0) = problem.u.point_support() {
        let cost = v
            .iter()
            .enumerate()
            .map(|(j, &vj)| vj * problem.cost(i0, j))
            .sum();
        let entropy = v
            .iter()
            .filter(|&&vj| vj > 0.0)
            .map(|&vj| vj * vj.ln())
            .sum();
        return (cost, entropy);
    }
    if let Some(j0) = problem.v.point_support() {
        let cost = u
            .iter()
            .enumerate()
            .map(|(i, &ui)| ui * problem.cost(i, j0))
            .sum();
        let entropy = u
            .iter()
            .filter(|&&ui| ui > 0.0)
            .map(|&ui| ui * ui.ln())
            .sum();
        return (cost, entropy);
    }
    if problem.size() <= DEFAULT_DENSE_LIMIT {
        objective_terms_dense(problem, a, b)
    } else {
        objective_terms_structured(problem, a, b)
    }
}

fn objective_terms_dense(problem: &SinkhornProblem, a: &[f64], b: &[f64]) -> (f64, f64) {
    let size = problem.size();
    let mut cost = 0.0;
    let mut entropy = 0.0;
    for i in 0..size {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..size {
            if b[j] == 0.0 {
                continue;
            }
            let gamma = a[i] * problem.kernel_entry(i, j) * b[j];
            cost += gamma * problem.cost(i, j);
            if gamma > 0.0 {
                entropy += gamma * gamma.ln();
            }
        }
    }
    (cost, entropy)
}

/// O(n) objective evaluation: the plan-weighted distance sum comes from
/// the differentiated geometric sweeps, and `Σ γ ln γ` expands through
/// `ln γ_ij = ln a_i + ln b_j + ln λ · (distance/h)` into marginal sums.
fn objective_terms_structured(problem: &SinkhornProblem, a: &[f64], b: &[f64]) -> (f64, f64) {
    let weighted: f64 = match &problem.kernel {
        Kernel::One(q) => {
            let wb = q.weighted_matvec(b).expect("lengths fixed");
            a.iter().zip(&wb).map(|(ai, wbi)| ai * wbi).sum()
        }
        Kernel::Two(q) => {
            let w1 = q.weighted_matvec_axis1(b).expect("lengths fixed");
            let w2 = q.weighted_matvec_axis2(b).expect("lengths fixed");
            a.iter()
                .zip(w1.iter().zip(&w2))
                .map(|(ai, (x, y))| ai * (x + y))
                .sum()
        }
    };
    let cost = problem.h * weighted;
    let kb = problem.kernel.matvec(b).expect("lengths fixed");
    let ka = problem.kernel.matvec(a).expect("lengths fixed");
    let mut entropy = weighted * problem.lambda.ln();
    for (ai, kbi) in a.iter().zip(&kb) {
        if *ai > 0.0 {
            entropy += ai * ai.ln() * kbi;
        }
    }
    for (bj, kaj) in b.iter().zip(&ka) {
        if *bj > 0.0 {
            entropy += bj * bj.ln() * kaj;
        }
    }
    (cost, entropy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splitmix_unit(seed: u64, count: usize) -> Vec<f64> {
        let mut state = seed;
        (0..count)
            .map(|_| {
                state = state.wrapping_add(0x9E3779B97F4A7C15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
                z ^= z >> 31;
                (z >> 11) as f64 / 9007199254740992.0
            })
            .collect()
    }

    fn dist_1d(seed: u64, n: usize) -> DiscreteDist {
        let mass: Vec<f64> = splitmix_unit(seed, n).iter().map(|r| 0.2 + r).collect();
        DiscreteDist::new(mass, Shape::OneD(n)).unwrap()
    }

    #[test]
    fn lambda_from_grid_examples() {
        assert!((lambda_from_grid(0.1, 0.1).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((lambda_from_grid(0.05, 0.025).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        // h → 0 approaches 1 from below.
        let l = lambda_from_grid(1e-9, 1.0).unwrap();
        assert!(l < 1.0 && l > 0.999_999_99);
        assert!(matches!(
            lambda_from_grid(0.0, 1.0),
            Err(SinkhornError::Domain { .. })
        ));
        assert!(matches!(
            lambda_from_grid(1.0, 0.0),
            Err(SinkhornError::Domain { .. })
        ));
    }

    #[test]
    fn parse_1d_normalizes() {
        let d = parse_distribution_1d("1\n1\n1\n1\n").unwrap();
        assert_eq!(d.mass(), &[0.25, 0.25, 0.25, 0.25]);
        assert_eq!(d.shape(), Shape::OneD(4));
        assert_eq!(d.original_total(), 4.0);
    }

    #[test]
    fn parse_1d_reports_line_numbers() {
        match parse_distribution_1d("1\n-1\n") {
            Err(DistError::Negative { line: 2, value }) => assert_eq!(value, -1.0),
            other => panic!("unexpected: {other:?}"),
        }
        match parse_distribution_1d("# comment\n\n0.5\nxyz\n") {
            Err(DistError::Parse { line: 4, token }) => assert_eq!(token, "xyz"),
            other => panic!("unexpected: {other:?}"),
        }
        assert!(matches!(
            parse_distribution_1d("0\n0\n"),
            Err(DistError::AllZeros)
        ));
        assert!(matches!(parse_distribution_1d(""), Err(DistError::Empty)));
    }

    #[test]
    fn parse_2d_grid() {
        let d = parse_distribution_2d("0.5,0.5\n0.0,1.0\n").unwrap();
        assert_eq!(d.shape(), Shape::TwoD { n: 2, m: 2 });
        assert_eq!(d.mass(), &[0.25, 0.25, 0.0, 0.5]);
        assert!(matches!(
            parse_distribution_2d("1,2\n3\n"),
            Err(DistError::RaggedRow { line: 2, .. })
        ));
    }

    #[test]
    fn point_mass_self_transport_is_exactly_zero() {
        let shape = Shape::OneD(5);
        let u = DiscreteDist::point_mass(0, shape);
        let v = DiscreteDist::point_mass(0, shape);
        let p = SinkhornProblem::new(0.3, 0.7, u, v).unwrap();
        let r = solve(&p, 1e-8, 1000).unwrap();
        assert!(r.converged);
        assert_eq!(r.transport_cost, 0.0);
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn point_mass_pair_distance_is_ground_cost() {
        let shape = Shape::OneD(6);
        let u = DiscreteDist::point_mass(1, shape);
        let v = DiscreteDist::point_mass(4, shape);
        let p = SinkhornProblem::new(0.25, 0.5, u, v).unwrap();
        let r = solve(&p, 1e-8, 1000).unwrap();
        // The only feasible plan moves all mass across |4−1| cells.
        assert_eq!(r.transport_cost, 3.0 * 0.25);
        assert_eq!(r.distance, 3.0 * 0.25);
    }

    #[test]
    fn two_cell_uniform_marginals_give_symmetric_plan() {
        let (h, eps) = (0.3, 0.7);
        let u = DiscreteDist::new(vec![0.5, 0.5], Shape::OneD(2)).unwrap();
        let p = SinkhornProblem::new(h, eps, u.clone(), u).unwrap();
        let r = solve(&p, 1e-12, 100_000).unwrap();
        assert!(r.converged);
        let lambda = p.lambda();
        let plan = |i: usize, j: usize| r.a[i] * lambda.powi((i as i32 - j as i32).abs()) * r.b[j];
        assert!((plan(0, 1) - plan(1, 0)).abs() < 1e-14);
        // Only the off-diagonal entries move mass, each across one cell.
        assert!((r.transport_cost - h * 2.0 * plan(0, 1)).abs() < 1e-14);
    }

    #[test]
    fn single_cell_grid_distance_is_zero() {
        let shape = Shape::TwoD { n: 1, m: 1 };
        let u = DiscreteDist::new(vec![1.0], shape).unwrap();
        let p = SinkhornProblem::new(0.5, 1.0, u.clone(), u).unwrap();
        let r = solve(&p, 1e-8, 100).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.transport_cost, 0.0);
    }

    #[test]
    fn far_apart_mass_with_tiny_regularization_underflows() {
        // λ = e^{−50}: kernel entries vanish beyond a few cells, so the
        // scaling against mass at the far end divides by an exact zero.
        let n = 50;
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        u[1] = 1e-3;
        let mut v = vec![0.0; n];
        v[n - 1] = 1.0;
        v[n - 2] = 1e-3;
        let u = DiscreteDist::new(u, Shape::OneD(n)).unwrap();
        let v = DiscreteDist::new(v, Shape::OneD(n)).unwrap();
        let p = SinkhornProblem::new(1.0, 0.02, u, v).unwrap();
        match solve(&p, 1e-8, 100) {
            Err(SinkhornError::Underflow { .. }) => {}
            other => panic!("expected underflow, got {other:?}"),
        }
    }

    #[test]
    fn marginals_are_feasible_after_convergence() {
        let n = 12;
        let u = dist_1d(101, n);
        let v = dist_1d(202, n);
        let p = SinkhornProblem::new(0.2, 0.4, u.clone(), v.clone()).unwrap();
        let tol = 1e-10;
        let r = solve(&p, tol, 100_000).unwrap();
        assert!(r.converged, "marginal error {}", r.marginal_error);
        // Row and column sums of γ = diag(a) K diag(b) reproduce u and v.
        let q = Wass1D::new(n, p.lambda()).unwrap();
        let kb = q.matvec(&r.b).unwrap();
        let ka = q.matvec(&r.a).unwrap();
        for i in 0..n {
            assert!((r.a[i] * kb[i] - u.mass()[i]).abs() < tol * 10.0);
            assert!((r.b[i] * ka[i] - v.mass()[i]).abs() < tol * 10.0);
        }
        // Positive inputs keep every scaling positive.
        assert!(r.a.iter().all(|&x| x > 0.0));
        assert!(r.b.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn distance_is_symmetric_in_the_marginals() {
        let n = 9;
        let u = dist_1d(11, n);
        let v = dist_1d(12, n);
        let fwd = solve(
            &SinkhornProblem::new(0.25, 0.5, u.clone(), v.clone()).unwrap(),
            1e-10,
            100_000,
        )
        .unwrap();
        let rev = solve(
            &SinkhornProblem::new(0.25, 0.5, v, u).unwrap(),
            1e-10,
            100_000,
        )
        .unwrap();
        assert!(
            (fwd.distance - rev.distance).abs() < 1e-8,
            "{} vs {}",
            fwd.distance,
            rev.distance
        );
    }

    #[test]
    fn residuals_shrink_monotonically_on_positive_fixtures() {
        let n = 8;
        let p = SinkhornProblem::new(0.25, 0.5, dist_1d(31, n), dist_1d(32, n)).unwrap();
        let mut solver = SinkhornSolver::new(&p).unwrap();
        let mut prev = f64::INFINITY;
        for _ in 0..200 {
            let r = solver.step().unwrap();
            assert!(
                r <= prev * (1.0 + 1e-9) + 1e-15,
                "residual rose from {prev:.3e} to {r:.3e}"
            );
            prev = r;
            if r < 1e-13 {
                break;
            }
        }
    }

    #[test]
    fn unconverged_run_reports_flag_and_best_iterate() {
        let n = 16;
        let p = SinkhornProblem::new(0.5, 0.05, dist_1d(41, n), dist_1d(42, n)).unwrap();
        let r = solve(&p, 1e-14, 2).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 2);
        assert!(r.marginal_error > 1e-14);
    }

    #[test]
    fn structured_and_dense_objectives_agree() {
        let n = 24;
        let p = SinkhornProblem::new(0.2, 0.45, dist_1d(51, n), dist_1d(52, n)).unwrap();
        let r = solve(&p, 1e-11, 100_000).unwrap();
        let dense = objective_terms_dense(&p, &r.a, &r.b);
        let structured = objective_terms_structured(&p, &r.a, &r.b);
        assert!(
            (dense.0 - structured.0).abs() < 1e-12,
            "{dense:?} vs {structured:?}"
        );
        assert!(
            (dense.1 - structured.1).abs() < 1e-11,
            "{dense:?} vs {structured:?}"
        );
    }

    #[test]
    fn two_d_solve_matches_axiswise_structure() {
        // Separable marginals factor the scalings into per-axis scalings.
        let (n, m) = (3usize, 2usize);
        let u1 = dist_1d(61, n);
        let u2 = dist_1d(62, m);
        let v1 = dist_1d(63, n);
        let v2 = dist_1d(64, m);
        let outer = |x: &DiscreteDist, y: &DiscreteDist| {
            let mut mass = vec![0.0; n * m];
            for i2 in 0..m {
                for i1 in 0..n {
                    mass[i2 * n + i1] = y.mass()[i2] * x.mass()[i1];
                }
            }
            DiscreteDist::new(mass, Shape::TwoD { n, m }).unwrap()
        };
        let (h, eps) = (0.4, 0.8);
        let p2 = SinkhornProblem::new(h, eps, outer(&u1, &u2), outer(&v1, &v2)).unwrap();
        let r2 = solve(&p2, 1e-12, 200_000).unwrap();
        assert!(r2.converged);

        let p1a = SinkhornProblem::new(h, eps, u1, v1).unwrap();
        let p1b = SinkhornProblem::new(h, eps, u2, v2).unwrap();
        let ra = solve(&p1a, 1e-12, 200_000).unwrap();
        let rb = solve(&p1b, 1e-12, 200_000).unwrap();
        // Scalings are unique up to a scalar factor; compare the implied
        // plans entrywise instead of the raw scalings.
        let q1 = Wass1D::new(n, p2.lambda()).unwrap();
        let q2 = Wass1D::new(m, p2.lambda()).unwrap();
        for i2 in 0..m {
            for i1 in 0..n {
                for j2 in 0..m {
                    for j1 in 0..n {
                        let plan2 = r2.a[i2 * n + i1]
                            * q2.entry(i2, j2)
                            * q1.entry(i1, j1)
                            * r2.b[j2 * n + j1];
                        let plan_axis = (ra.a[i1] * q1.entry(i1, j1) * ra.b[j1])
                            * (rb.a[i2] * q2.entry(i2, j2) * rb.b[j2]);
                        assert!(
                            (plan2 - plan_axis).abs() < 1e-8,
                            "plan mismatch at (({i2},{i1}),({j2},{j1}))"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn result_json_field_order_is_stable() {
        let p = SinkhornProblem::new(0.25, 0.5, dist_1d(11, 4), dist_1d(12, 4)).unwrap();
        let r = solve(&p, 1e-10, 100_000).unwrap();
        let json = r.to_json();
        assert!(json.starts_with("{\"distance\":"));
        let order = [
            "distance",
            "transport_cost",
            "entropy_term",
            "iterations",
            "marginal_error",
            "lambda",
        ];
        let mut last = 0;
        for key in order {
            let pos = json.find(&format!("\"{key}\":")).unwrap();
            assert!(pos >= last, "field {key} out of order");
            last = pos;
        }
    }
}
