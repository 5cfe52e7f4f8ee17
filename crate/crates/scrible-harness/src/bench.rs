//! SCRiBLe vs BanditPGD comparison over growing horizons.
//!
//! For each horizon the table reports mean regret of SCRiBLe (argmin and
//! single-Newton-step updates, auto eta) and of BanditPGD with (eta,
//! delta) swept over a small grid around the classical `T^{-3/4}`,
//! `T^{-1/4}` scalings. Log-log slopes are fitted at the end. The numbers
//! are recorded for comparison, not gated: finite-horizon constants
//! dominate at these sizes.

use scrible_core::{
    make_log_barrier, make_oblivious_sequence, run_bandit_pgd, run_scrible, AlgorithmKind,
    ConvexPolytope, EtaChoice, FixedSequenceEnv, RunConfig, SequenceKind, UpdateMode,
    DEFAULT_NEWTON_TOL,
};

use crate::HarnessError;

pub const BENCH_HORIZONS: [usize; 5] = [1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14];

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub horizon: usize,
    pub scrible_mean_regret: f64,
    pub scrible_single_newton_mean_regret: f64,
    pub pgd_mean_regret: f64,
    pub pgd_eta: f64,
    pub pgd_delta: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub scrible_loglog_slope: f64,
    pub pgd_loglog_slope: f64,
}

fn rotating_setup(horizon: usize) -> Result<(ConvexPolytope, Vec<Vec<f64>>), HarnessError> {
    let body = ConvexPolytope::symmetric_box(2, 1.0)?;
    let kind = SequenceKind::Rotating(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let seq = make_oblivious_sequence(&kind, &body, horizon, 0)?;
    Ok((body, seq.vectors().to_vec()))
}

fn mean_scrible_regret(
    horizon: usize,
    replications: usize,
    update_mode: UpdateMode,
) -> Result<f64, HarnessError> {
    let (body, vectors) = rotating_setup(horizon)?;
    let barrier = make_log_barrier(body.clone());
    let mut total = 0.0;
    for r in 0..replications {
        let mut config = RunConfig::scrible(horizon, r as u64);
        config.update_mode = update_mode;
        let mut env =
            FixedSequenceEnv::new_affine(vectors.clone(), vec![0.0; horizon], &body)?;
        let trace = run_scrible(&mut env, &config, &barrier).map_err(|failure| {
            HarnessError::Replication {
                replication: r,
                source: Box::new(failure),
            }
        })?;
        total += trace.regret;
    }
    Ok(total / replications as f64)
}

fn mean_pgd_regret(
    horizon: usize,
    replications: usize,
    eta: f64,
    delta: f64,
) -> Result<f64, HarnessError> {
    let (body, vectors) = rotating_setup(horizon)?;
    let mut total = 0.0;
    for r in 0..replications {
        let mut config = RunConfig::scrible(horizon, r as u64);
        config.algorithm = AlgorithmKind::BanditPgd;
        config.eta = EtaChoice::Fixed(eta);
        config.pgd_delta = Some(delta);
        config.newton_tol = DEFAULT_NEWTON_TOL;
        let mut env =
            FixedSequenceEnv::new_affine(vectors.clone(), vec![0.0; horizon], &body)?;
        let trace = run_bandit_pgd(&mut env, &config, &body).map_err(|failure| {
            HarnessError::Replication {
                replication: r,
                source: Box::new(failure),
            }
        })?;
        total += trace.regret;
    }
    Ok(total / replications as f64)
}

fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(t, _)| (*t as f64).ln()).collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|(_, r)| r.max(1e-9).ln())
        .collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let var: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    cov / var
}

/// Runs the comparison sweep.
pub fn bench_comparison(replications: usize) -> Result<BenchReport, HarnessError> {
    let mut rows = Vec::with_capacity(BENCH_HORIZONS.len());
    for &horizon in &BENCH_HORIZONS {
        let scrible_mean = mean_scrible_regret(horizon, replications, UpdateMode::Argmin)?;
        let single_newton_mean =
            mean_scrible_regret(horizon, replications, UpdateMode::SingleNewton)?;

        let t = horizon as f64;
        let mut best: Option<(f64, f64, f64)> = None;
        for eta_scale in [0.5, 1.0, 2.0] {
            for delta_scale in [0.5, 1.0, 2.0] {
                let eta = eta_scale * t.powf(-0.75);
                let delta = (delta_scale * t.powf(-0.25)).min(0.45);
                let mean = mean_pgd_regret(horizon, replications, eta, delta)?;
                if best.is_none_or(|(m, _, _)| mean < m) {
                    best = Some((mean, eta, delta));
                }
            }
        }
        let (pgd_mean, pgd_eta, pgd_delta) = best.expect("non-empty sweep");

        rows.push(BenchRow {
            horizon,
            scrible_mean_regret: scrible_mean,
            scrible_single_newton_mean_regret: single_newton_mean,
            pgd_mean_regret: pgd_mean,
            pgd_eta,
            pgd_delta,
        });
    }

    let scrible_points: Vec<(usize, f64)> = rows
        .iter()
        .map(|r| (r.horizon, r.scrible_mean_regret))
        .collect();
    let pgd_points: Vec<(usize, f64)> = rows
        .iter()
        .map(|r| (r.horizon, r.pgd_mean_regret))
        .collect();
    Ok(BenchReport {
        scrible_loglog_slope: loglog_slope(&scrible_points),
        pgd_loglog_slope: loglog_slope(&pgd_points),
        rows,
    })
}

/// Renders the comparison as an aligned text table.
pub fn render_table(report: &BenchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>7} {:>16} {:>22} {:>14} {:>10} {:>10}\n",
        "T", "scrible_regret", "scrible_1newton_regret", "pgd_regret", "pgd_eta", "pgd_delta"
    ));
    for row in &report.rows {
        out.push_str(&format!(
            "{:>7} {:>16.3} {:>22.3} {:>14.3} {:>10.5} {:>10.5}\n",
            row.horizon,
            row.scrible_mean_regret,
            row.scrible_single_newton_mean_regret,
            row.pgd_mean_regret,
            row.pgd_eta,
            row.pgd_delta
        ));
    }
    out.push_str(&format!(
        "log-log slope: scrible {:.3}, pgd {:.3}\n",
        report.scrible_loglog_slope, report.pgd_loglog_slope
    ));
    out
}

/// Writes the rows as CSV.
pub fn write_bench_csv(report: &BenchReport, path: &std::path::Path) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record([
        "T",
        "scrible_mean_regret",
        "scrible_single_newton_mean_regret",
        "pgd_mean_regret",
        "pgd_eta",
        "pgd_delta",
    ])?;
    for row in &report.rows {
        writer.write_record([
            row.horizon.to_string(),
            format!("{}", row.scrible_mean_regret),
            format!("{}", row.scrible_single_newton_mean_regret),
            format!("{}", row.pgd_mean_regret),
            format!("{}", row.pgd_eta),
            format!("{}", row.pgd_delta),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
