//! Centralized tolerance constants and size limits.
//!
//! Every threshold used by the library and its verification suites lives
//! here; nothing else hard-codes a magic tolerance.

/// Default cap on dense materialization (order of the largest matrix the
/// library will build explicitly). Implicit operations have no cap.
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

/// Exponent magnitude (natural log) above which closed-form geometric
/// expressions are reported in log space instead of linear. Chosen below
/// the f64 overflow threshold (~709) with margin.
pub const LOG_SCALE_EXPONENT: f64 = 600.0;

/// Tolerance bundle shared by solvers and verification suites.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative residual allowed for structured solves: `‖Qx−b‖_∞ ≤ solve_rel·‖b‖_∞`.
    pub solve_rel: f64,
    /// Max-abs error allowed per unit order for matvec agreement:
    /// structured vs dense differ by at most `matvec_per_n · n`.
    pub matvec_per_n: f64,
    /// Slack scale for bound certification: an inequality `exact ≤ bound`
    /// passes when `exact ≤ bound + pass_slack·max(1, |bound|)`.
    pub pass_slack: f64,
    /// Relative change of the Rayleigh quotient at which power iteration
    /// declares convergence.
    pub power_tol: f64,
    /// Iteration cap for power/inverse iteration.
    pub power_max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            solve_rel: 1e-10,
            matvec_per_n: 1e-12,
            pass_slack: 1e-9,
            power_tol: 1e-12,
            power_max_iter: 50_000,
        }
    }
}

impl Tolerances {
    /// Slack allowed when comparing an exact value against a bound of the
    /// given magnitude. Strict inequalities can only be violated by
    /// floating rounding, which scales with the bound.
    pub fn bound_slack(&self, bound: f64) -> f64 {
        self.pass_slack * bound.abs().max(1.0)
    }
}
