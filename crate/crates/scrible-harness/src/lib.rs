//! Experiment harness for the bandit linear optimization library:
//! configuration, replicated execution with CSV/JSON persistence, barrier
//! verification, the bandit-reduction enumeration oracle, and the
//! SCRiBLe-vs-PGD benchmark sweep.

pub mod bench;
pub mod config;
pub mod experiment;
pub mod reduction;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] scrible_core::Error),
    #[error("replication {replication}: {source}")]
    Replication {
        replication: usize,
        source: Box<scrible_core::RunFailure>,
    },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub use bench::{bench_comparison, render_table, write_bench_csv, BenchReport, BenchRow};
pub use config::{
    prepare, BodyFile, EnvironmentSpec, EtaField, ExperimentConfig, GraphFile,
    PreparedExperiment,
};
pub use experiment::{
    execute_replications, run_experiment, summarize, write_plot_data, write_trace_csv,
    ReplicationSummary, Summary, SUMMARY_SCHEMA, THREADS_ENV_VAR,
};
pub use reduction::{enumerate_reduction_check, ReductionCheck, REDUCTION_TOL};
pub use verify::{verify_barrier, VerifyReport};
