//! Replication orchestration and trace persistence.
//!
//! Every replication writes a per-round CSV; the experiment writes one JSON
//! summary with mean/std regret and the theorem bound. Replications run in
//! parallel (capped by `SCRIBLE_THREADS`) with disjoint round streams, and
//! all outputs are deterministic apart from wall-time fields.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use scrible_core::{
    run_bandit_pgd, run_ftrl_full_info, run_scrible, theorem_regret_bound, AlgorithmKind,
    EtaChoice, RunTrace,
};

use crate::config::{ExperimentConfig, PreparedExperiment};
use crate::HarnessError;

pub const SUMMARY_SCHEMA: &str = "scrible.summary.v1";
pub const THREADS_ENV_VAR: &str = "SCRIBLE_THREADS";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub replication: usize,
    pub seed: u64,
    pub regret: f64,
    pub total_loss: f64,
    pub comparator_value: f64,
    pub rounds: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub schema: String,
    pub config: ExperimentConfig,
    pub dimension: usize,
    pub theta: f64,
    pub eta_resolved: f64,
    pub loss_bound: f64,
    pub replications: Vec<ReplicationSummary>,
    pub mean_regret: f64,
    pub std_regret: f64,
    /// Guarantee value `n L sqrt(8 theta T log T) + 2 L` for the config's
    /// parameters.
    pub theorem_bound: f64,
    /// Whether mean regret met the bound; present only when the guarantee
    /// applies (scrible with the auto schedule).
    pub bound_satisfied: Option<bool>,
    pub total_wall_ms: u64,
}

fn thread_pool() -> Result<rayon::ThreadPool, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV_VAR) {
        let threads: usize = value.parse().map_err(|_| {
            HarnessError::Config(format!("{THREADS_ENV_VAR} must be a positive integer"))
        })?;
        if threads == 0 {
            return Err(HarnessError::Config(format!(
                "{THREADS_ENV_VAR} must be a positive integer"
            )));
        }
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))
}

fn run_one(prepared: &PreparedExperiment, replication: usize) -> Result<RunTrace, HarnessError> {
    let config = prepared.run_config_for(replication);
    let mut env = prepared.environment()?;
    let trace = match config.algorithm {
        AlgorithmKind::Scrible => run_scrible(&mut env, &config, &prepared.barrier),
        AlgorithmKind::BanditPgd => run_bandit_pgd(&mut env, &config, &prepared.body),
        AlgorithmKind::FtrlFull => {
            let eta = match config.eta {
                EtaChoice::Fixed(v) => v,
                EtaChoice::Auto => {
                    return Err(HarnessError::Config(
                        "ftrl_full needs an explicit eta".into(),
                    ))
                }
            };
            run_ftrl_full_info(&prepared.vectors, eta, &prepared.barrier, config.newton_tol)
        }
    };
    trace.map_err(|failure| HarnessError::Replication {
        replication,
        source: Box::new(failure),
    })
}

/// Runs all replications in parallel; results come back indexed in
/// replication order regardless of scheduling.
pub fn execute_replications(
    prepared: &PreparedExperiment,
) -> Result<Vec<RunTrace>, HarnessError> {
    let pool = thread_pool()?;
    let count = prepared.config.replications;
    pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|r| run_one(prepared, r))
            .collect()
    })
}

/// Per-round comparator losses, for cumulative regret columns.
fn comparator_running_losses(prepared: &PreparedExperiment, comparator: &[f64]) -> Vec<f64> {
    prepared
        .vectors
        .iter()
        .zip(&prepared.offsets)
        .map(|(f, c)| c + scrible_core::linalg::dot(f, comparator))
        .collect()
}

fn format_full(v: f64) -> String {
    // Shortest round-trip decimal; parses back to the identical f64.
    format!("{v}")
}

/// Writes one replication trace as CSV with the fixed column set
/// `t, x0.., y0.., observed_loss, fhat0.., cum_loss, cum_regret`.
pub fn write_trace_csv(
    trace: &RunTrace,
    prepared: &PreparedExperiment,
    path: &Path,
) -> Result<(), HarnessError> {
    let n = prepared.body.dimension();
    let mut writer = csv::Writer::from_path(path)?;

    let mut header: Vec<String> = vec!["t".into()];
    header.extend((0..n).map(|j| format!("x{j}")));
    header.extend((0..n).map(|j| format!("y{j}")));
    header.push("observed_loss".into());
    header.extend((0..n).map(|j| format!("fhat{j}")));
    header.push("cum_loss".into());
    header.push("cum_regret".into());
    writer.write_record(&header)?;

    let comparator_losses = comparator_running_losses(prepared, &trace.comparator);
    let mut comparator_running = 0.0;
    for record in &trace.rounds {
        comparator_running += comparator_losses[record.round - 1];
        let mut row: Vec<String> = vec![record.round.to_string()];
        row.extend(record.center.iter().copied().map(format_full));
        row.extend(record.play.iter().copied().map(format_full));
        row.push(format_full(record.observed_loss));
        row.extend(record.estimate.iter().copied().map(format_full));
        row.push(format_full(record.cumulative_true_loss));
        row.push(format_full(record.cumulative_true_loss - comparator_running));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Downsampled `(t, mean cumulative regret, bound)` table for plotting.
pub fn write_plot_data(
    traces: &[RunTrace],
    prepared: &PreparedExperiment,
    bound: f64,
    path: &Path,
) -> Result<(), HarnessError> {
    let horizon = prepared.config.horizon;
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["t", "mean_cum_regret", "bound"])?;
    if horizon == 0 {
        writer.flush()?;
        return Ok(());
    }

    // Mean cumulative regret across replications at each round.
    let mut mean_cum = vec![0.0; horizon];
    for trace in traces {
        let comparator_losses = comparator_running_losses(prepared, &trace.comparator);
        let mut comparator_running = 0.0;
        for record in &trace.rounds {
            comparator_running += comparator_losses[record.round - 1];
            mean_cum[record.round - 1] +=
                (record.cumulative_true_loss - comparator_running) / traces.len() as f64;
        }
    }

    let points = 512.min(horizon);
    for k in 1..=points {
        let t = k * horizon / points;
        writer.write_record([
            t.to_string(),
            format_full(mean_cum[t - 1]),
            format_full(bound),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values
        .iter()
        .map(|v| (v - mean).powi(2))
        .sum::<f64>()
        / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Summarizes executed traces; `wall_ms` entries are per-replication wall
/// times (zero when unknown).
pub fn summarize(
    prepared: &PreparedExperiment,
    traces: &[RunTrace],
    wall_ms: &[u64],
    total_wall_ms: u64,
) -> Result<Summary, HarnessError> {
    let n = prepared.body.dimension();
    let theta = prepared.barrier.theta();
    let eta_resolved = prepared.run.resolve_eta(theta, n)?;
    let regrets: Vec<f64> = traces.iter().map(|t| t.regret).collect();
    let (mean_regret, std_regret) = mean_and_std(&regrets);
    let theorem_bound = theorem_regret_bound(
        theta,
        n,
        prepared.run.loss_bound,
        prepared.config.horizon,
    );
    let bound_applies = prepared.run.algorithm == AlgorithmKind::Scrible
        && matches!(prepared.run.eta, EtaChoice::Auto);
    let replications = traces
        .iter()
        .enumerate()
        .map(|(r, trace)| ReplicationSummary {
            replication: r,
            seed: prepared.run_config_for(r).seed,
            regret: trace.regret,
            total_loss: trace.total_loss,
            comparator_value: trace.comparator_value,
            rounds: trace.rounds.len(),
            wall_ms: wall_ms.get(r).copied().unwrap_or(0),
        })
        .collect();
    Ok(Summary {
        schema: SUMMARY_SCHEMA.into(),
        config: prepared.config.clone(),
        dimension: n,
        theta,
        eta_resolved,
        loss_bound: prepared.run.loss_bound,
        replications,
        mean_regret,
        std_regret,
        theorem_bound,
        bound_satisfied: bound_applies.then_some(mean_regret <= theorem_bound),
        total_wall_ms,
    })
}

/// Runs the experiment and writes `rep_###.csv` per replication,
/// `summary.json`, and optionally `plot_data.csv` under `out_dir`.
pub fn run_experiment(
    prepared: &PreparedExperiment,
    out_dir: &Path,
    emit_plot_data: bool,
) -> Result<(Summary, Vec<PathBuf>), HarnessError> {
    fs::create_dir_all(out_dir)?;
    let started = Instant::now();
    let traces = execute_replications(prepared)?;
    let total_wall_ms = started.elapsed().as_millis() as u64;

    let mut paths = Vec::with_capacity(traces.len());
    for (r, trace) in traces.iter().enumerate() {
        let path = out_dir.join(format!("rep_{r:03}.csv"));
        write_trace_csv(trace, prepared, &path)?;
        paths.push(path);
    }

    let wall_ms = vec![0u64; traces.len()];
    let summary = summarize(prepared, &traces, &wall_ms, total_wall_ms)?;
    fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;

    if emit_plot_data {
        write_plot_data(
            &traces,
            prepared,
            summary.theorem_bound,
            &out_dir.join("plot_data.csv"),
        )?;
    }
    Ok((summary, paths))
}
