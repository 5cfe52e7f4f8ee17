//! `scrible` command line: run experiments, verify barriers, check the
//! bandit reduction identity, and benchmark SCRiBLe against BanditPGD.
//!
//! Exit codes: 0 success, 1 usage or execution error, 2 a requested
//! invariant or bound check failed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scrible_harness::{
    bench_comparison, enumerate_reduction_check, prepare, render_table, run_experiment,
    verify_barrier, write_bench_csv, EtaField, ExperimentConfig, HarnessError,
};

#[derive(Parser)]
#[command(
    name = "scrible",
    about = "Bandit linear optimization runs with self-concordant barrier sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured experiment and write traces plus a summary.
    Run {
        /// Experiment JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for rep_###.csv and summary.json.
        #[arg(long)]
        out: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the replication count.
        #[arg(long)]
        replications: Option<usize>,
        /// Override eta: "auto" or a positive number.
        #[arg(long)]
        eta: Option<EtaField>,
        /// Override the update mode: argmin or single-newton.
        #[arg(long, value_name = "MODE")]
        update_mode: Option<String>,
        /// Also write a downsampled (t, mean regret, bound) table.
        #[arg(long)]
        emit_plot_data: bool,
    },
    /// Sample-check the log barrier of a body file.
    VerifyBarrier {
        /// Body JSON file {"A": [[..]], "b": [..]}.
        #[arg(long)]
        body: PathBuf,
        /// Number of sampled interior points.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact-enumeration check of the bandit reduction identity.
    CheckReduction {
        /// Dimension of the box body (1 or 2).
        #[arg(long)]
        n: usize,
        /// Horizon.
        #[arg(long = "T", value_name = "T")]
        horizon: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SCRiBLe vs BanditPGD regret sweep over T in {2^10 .. 2^14}.
    Bench {
        /// Replications per configuration.
        #[arg(long, default_value_t = 10)]
        replications: usize,
        /// Optional CSV output path for the comparison table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command: `Ok(true)` all checks passed, `Ok(false)` a
/// requested check failed.
fn execute(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            replications,
            eta,
            update_mode,
            emit_plot_data,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let mut experiment = ExperimentConfig::from_json(&text)?;
            if let Some(seed) = seed {
                experiment.seed = seed;
            }
            if let Some(replications) = replications {
                experiment.replications = replications;
            }
            if let Some(eta) = eta {
                experiment.eta = eta;
            }
            if let Some(mode) = update_mode {
                experiment.update_mode = mode.replace('-', "_");
            }

            let prepared = prepare(&experiment)?;
            let (summary, _) = run_experiment(&prepared, &out, emit_plot_data)?;
            println!(
                "{} replications, mean regret {:.6}, std {:.6}",
                summary.replications.len(),
                summary.mean_regret,
                summary.std_regret
            );
            println!(
                "theorem bound {:.6}, eta {:.6}, theta {}, n {}",
                summary.theorem_bound, summary.eta_resolved, summary.theta, summary.dimension
            );
            match summary.bound_satisfied {
                Some(true) => {
                    println!("bound check: satisfied");
                    Ok(true)
                }
                Some(false) => {
                    println!("bound check: VIOLATED");
                    Ok(false)
                }
                None => {
                    println!("bound check: not applicable (fixed eta or baseline algorithm)");
                    Ok(true)
                }
            }
        }
        Command::VerifyBarrier { body, samples, seed } => {
            let text = std::fs::read_to_string(&body)?;
            let body_file: scrible_harness::BodyFile = serde_json::from_str(&text)?;
            let body = body_file.build()?;
            let report = verify_barrier(&body, samples, seed)?;
            println!(
                "containment: {}/{} ok",
                report.containment_checks - report.containment_failures,
                report.containment_checks
            );
            println!(
                "self-concordance: {}/{} ok",
                report.self_concordance_checks - report.self_concordance_failures,
                report.self_concordance_checks
            );
            println!(
                "barrier parameter: {}/{} ok",
                report.barrier_parameter_checks - report.barrier_parameter_failures,
                report.barrier_parameter_checks
            );
            println!(
                "derivatives: {}/{} ok",
                report.derivative_checks - report.derivative_failures,
                report.derivative_checks
            );
            Ok(report.all_passed())
        }
        Command::CheckReduction {
            n,
            horizon,
            eta,
            seed,
        } => {
            if !(1..=2).contains(&n) {
                return Err(HarnessError::Config("n must be 1 or 2".into()));
            }
            let body = scrible_core::ConvexPolytope::symmetric_box(n, 1.0)?;
            let barrier = scrible_core::make_log_barrier(body);
            let mut rng = scrible_core::RoundRng::labeled(seed, 0x52);
            let losses: Vec<Vec<f64>> = (0..horizon)
                .map(|_| (0..n).map(|_| rng.uniform_in(-0.9, 0.9)).collect())
                .collect();
            let check = enumerate_reduction_check(&losses, &barrier, eta, 1e-10)?;
            println!(
                "branches {}, lhs {:.12}, rhs {:.12}, |difference| {:.3e}",
                check.branches, check.lhs, check.rhs, check.difference
            );
            println!("equal within 1e-9: {}", check.equal);
            Ok(check.equal)
        }
        Command::Bench { replications, out } => {
            let report = bench_comparison(replications)?;
            print!("{}", render_table(&report));
            if let Some(path) = out {
                write_bench_csv(&report, &path)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits; everything
            // else is a usage error.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
