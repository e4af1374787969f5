//! Structured linear algebra for the exponential-decay Toeplitz kernel
//! `Q(n, λ)` with entries `λ^|i−j|`, `0 < λ < 1`, as it arises in
//! entropy-regularized Wasserstein-1 transport (`λ = e^{−h/ε}`), together
//! with the two-dimensional Kronecker form `Q₂ ⊗ Q₁`.
//!
//! The crate provides:
//!
//! - [`wass`] — implicit 1D/2D kernel matrices with O(n) matvec, solve,
//!   factorization, and determinant;
//! - [`dense`] — a deliberately naive dense reference implementation
//!   (Gaussian elimination, cyclic Jacobi) used to validate everything else;
//! - [`bounds`] — exact norms in closed form plus lower/upper bounds on
//!   norms, condition numbers, spectra, and numerical ranges, with
//!   machine-checkable reports;
//! - [`hadamard`] — Hadamard-product decompositions and Hadamard-inverse
//!   norm formulas with overflow-safe log-space evaluation;
//! - [`sinkhorn`] — an entropic optimal-transport solver whose kernel
//!   applications run through the O(n) structured matvec;
//! - [`verify`] — the parameter-grid certification suites driven by the
//!   command-line harness.
//!
//! Every type is an immutable value after construction and every
//! operation is a pure function of its inputs, so concurrent use needs no
//! synchronization; only [`verify`] offers optional internal parallelism.

// Index-based sweeps over co-indexed arrays are the clearer idiom for the
// recurrence kernels in this crate.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod config;
pub mod dense;
pub mod emit;
pub mod hadamard;
pub mod sinkhorn;
pub mod verify;
pub mod wass;

pub use config::{Tolerances, DEFAULT_DENSE_LIMIT};
pub use dense::{dense_eigs_symmetric, dense_inverse, dense_norm, dense_solve, DenseMat, NormKind};
pub use wass::{Wass1D, Wass2D};
