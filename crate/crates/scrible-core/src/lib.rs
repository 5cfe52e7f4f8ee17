//! Bandit linear optimization with self-concordant barrier regularization.
//!
//! The library implements the SCRiBLe player — Dikin-ellipsoid sampling on
//! the barrier's local geometry, one-point unbiased loss estimation, and
//! follow-the-regularized-leader updates solved by damped Newton steps —
//! next to a full-information FTRL reference and a projected-gradient
//! bandit baseline, over polytope decision sets including online
//! shortest-path flow bodies.
//!
//! Everything is deterministic given a seed: randomness comes from
//! counter-based per-round streams, so traces replay bit-identically.

pub mod algorithms;
pub mod environments;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod linalg;
pub mod newton;
pub mod rng;

pub use algorithms::{
    best_in_hindsight, run_bandit_pgd, run_ftrl_full_info, run_scrible, theorem_condition_holds,
    theorem_eta, theorem_regret_bound, AlgorithmKind, EtaChoice, RoundRecord, RunConfig,
    RunFailure, RunResult, RunTrace, UpdateMode,
};
pub use environments::{
    build_flow_polytope, decompose_flow, delays_to_loss, make_oblivious_sequence, Environment,
    FixedSequenceEnv, FlowMap, GraphSpec, LossSequence, SequenceKind,
};
pub use error::{Error, Result};
pub use estimator::{
    average_estimate_over_outcomes, dikin_outcome, estimate_loss_vector,
    estimate_loss_vector_with_radius, sample_dikin_boundary, SampleOutcome,
};
pub use geometry::{
    make_log_barrier, random_body, symmetric_eigendecomposition, verify_barrier_parameter,
    verify_self_concordance, BarrierOracle, ConvexPolytope, EigenBasis,
};
pub use newton::{
    analytic_center, damped_newton_step, minimize, newton_decrement, Objective,
    DEFAULT_NEWTON_TOL,
};
pub use rng::RoundRng;
