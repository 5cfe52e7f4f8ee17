//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by geometry, solvers, samplers and run loops.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A query point is not strictly inside the body.
    #[error("point is not strictly interior: constraint {constraint} has slack {slack:.3e}")]
    NotInterior { constraint: usize, slack: f64 },

    /// The polytope {x : Ax <= b} has no strictly feasible point.
    #[error("polytope has empty interior")]
    EmptyInterior,

    /// A recession direction was found; the body is unbounded.
    #[error("polytope is unbounded along a probed direction")]
    Unbounded,

    /// Dimension mismatch or malformed constraint data.
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Matrix handed to the eigensolver is not symmetric.
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {deviation:.3e}")]
    NotSymmetric { i: usize, j: usize, deviation: f64 },

    /// A factorization or eigendecomposition detected a non-positive-definite matrix.
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    /// Newton iteration exceeded its step cap.
    #[error("Newton minimization did not converge: decrement {last_decrement:.3e} after {iterations} steps")]
    NoConvergence {
        iterations: usize,
        last_decrement: f64,
    },

    /// Finite-difference stencil would leave the barrier domain.
    #[error("finite-difference step {step:.3e} leaves the domain")]
    StencilOutsideDomain { step: f64 },

    /// A sampled prediction fell outside the closed body beyond tolerance.
    #[error("sampled prediction violates constraint {constraint} by {violation:.3e}")]
    PredictionOutsideBody { constraint: usize, violation: f64 },

    /// An observed loss exceeded the declared bound.
    #[error("round {round}: observed loss {observed} exceeds declared bound {bound}")]
    LossBoundViolated {
        round: usize,
        observed: f64,
        bound: f64,
    },

    /// A combinatorial guard (vertex or branch enumeration) was exceeded.
    #[error("enumeration too large: {0}")]
    SizeLimit(String),

    /// Run or environment configuration is invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An input violates a declared contract (delays, conservation, bounds).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The body has no usable decision freedom (e.g. a single-path flow polytope).
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
}

pub type Result<T> = std::result::Result<T, Error>;
