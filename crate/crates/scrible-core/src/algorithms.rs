//! Algorithm runners and regret accounting.
//!
//! Three players over a fixed horizon:
//!
//! - [`run_scrible`]: bandit FTRL with a self-concordant barrier. Per round
//!   it eigendecomposes the barrier Hessian at the current center, plays a
//!   Dikin-boundary point, turns the scalar observation into a one-point
//!   estimate, and re-minimizes the regularized cumulative estimate (or
//!   takes a single damped Newton step).
//! - [`run_ftrl_full_info`]: the full-information reference that plays the
//!   FTRL center itself and consumes true loss vectors.
//! - [`run_bandit_pgd`]: sphere-smoothed projected gradient descent over a
//!   shrunk body, the classical baseline.
//!
//! Regret is reported against the exact best-in-hindsight vertex, the
//! hardest fixed comparator. Runs are deterministic functions of
//! `(config, environment)` including the seed.

use crate::environments::Environment;
use crate::error::{Error, Result};
use crate::estimator::{estimate_loss_vector_with_radius, sample_dikin_boundary, SampleOutcome};
use crate::geometry::{symmetric_eigendecomposition, BarrierOracle, ConvexPolytope, CLOSED_TOL};
use crate::linalg;
use crate::newton::{analytic_center, damped_newton_step, minimize, Objective};
use crate::rng::RoundRng;

/// Which player a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    Scrible,
    FtrlFull,
    BanditPgd,
}

/// FTRL update flavor: full re-minimization or one damped Newton step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    Argmin,
    SingleNewton,
}

/// Learning rate: the theorem schedule or an explicit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaChoice {
    Auto,
    Fixed(f64),
}

/// Run parameters shared by all players.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub horizon: usize,
    pub eta: EtaChoice,
    pub loss_bound: f64,
    pub seed: u64,
    pub algorithm: AlgorithmKind,
    pub update_mode: UpdateMode,
    /// Exploration radius for BanditPGD; unused elsewhere.
    pub pgd_delta: Option<f64>,
    pub newton_tol: f64,
    /// Dikin sampling radius; 1.0 (the algorithm's choice) unless a caller
    /// opts into a shrink as a numerical safety valve.
    pub dikin_radius: f64,
    /// Permits running the auto schedule outside its applicability window.
    pub allow_condition_violation: bool,
}

impl RunConfig {
    pub fn scrible(horizon: usize, seed: u64) -> Self {
        RunConfig {
            horizon,
            eta: EtaChoice::Auto,
            loss_bound: 1.0,
            seed,
            algorithm: AlgorithmKind::Scrible,
            update_mode: UpdateMode::Argmin,
            pgd_delta: None,
            newton_tol: crate::newton::DEFAULT_NEWTON_TOL,
            dikin_radius: 1.0,
            allow_condition_violation: false,
        }
    }

    /// Resolves the learning rate for a body with barrier parameter
    /// `theta` in dimension `n`. The auto schedule exists only for
    /// SCRiBLe and demands the applicability condition `T / log T > 8
    /// theta` unless explicitly overridden.
    pub fn resolve_eta(&self, theta: f64, n: usize) -> Result<f64> {
        match self.eta {
            EtaChoice::Fixed(v) => {
                if v > 0.0 && v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::InvalidConfig(format!("eta must be positive, got {v}")))
                }
            }
            EtaChoice::Auto => {
                if self.algorithm != AlgorithmKind::Scrible {
                    return Err(Error::InvalidConfig(
                        "auto eta is defined only for scrible; pass an explicit value".into(),
                    ));
                }
                if !theorem_condition_holds(theta, self.horizon) && !self.allow_condition_violation
                {
                    return Err(Error::InvalidConfig(format!(
                        "T / log T = {:.3} does not exceed 8 theta = {:.3}; \
                         set allow_condition_violation to run anyway",
                        self.horizon as f64 / (self.horizon.max(2) as f64).ln(),
                        8.0 * theta
                    )));
                }
                theorem_eta(theta, n, self.loss_bound, self.horizon)
            }
        }
    }
}

/// Learning rate schedule `eta = sqrt(theta log T / (2 n^2 L^2 T))`.
pub fn theorem_eta(theta: f64, n: usize, loss_bound: f64, horizon: usize) -> Result<f64> {
    if horizon < 2 {
        return Err(Error::InvalidConfig(
            "eta schedule needs horizon >= 2 (log T > 0)".into(),
        ));
    }
    if !(theta > 0.0) || n == 0 || !(loss_bound > 0.0) {
        return Err(Error::InvalidConfig(
            "eta schedule needs positive theta, n and loss bound".into(),
        ));
    }
    let t = horizon as f64;
    let n = n as f64;
    Ok((theta * t.ln() / (2.0 * n * n * loss_bound * loss_bound * t)).sqrt())
}

/// Applicability condition of the regret guarantee: `T / log T > 8 theta`.
pub fn theorem_condition_holds(theta: f64, horizon: usize) -> bool {
    if horizon < 2 {
        return false;
    }
    let t = horizon as f64;
    t / t.ln() > 8.0 * theta
}

/// Regret guarantee value `n L sqrt(8 theta T log T) + 2 L`.
pub fn theorem_regret_bound(theta: f64, n: usize, loss_bound: f64, horizon: usize) -> f64 {
    if horizon < 2 {
        return 2.0 * loss_bound;
    }
    let t = horizon as f64;
    (n as f64) * loss_bound * (8.0 * theta * t * t.ln()).sqrt() + 2.0 * loss_bound
}

/// One round of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// Round index, 1-based.
    pub round: usize,
    /// FTRL center x_t.
    pub center: Vec<f64>,
    /// Point actually played (equals `center` for full information).
    pub play: Vec<f64>,
    /// Dikin sampling outcome; present only for SCRiBLe rounds.
    pub outcome: Option<SampleOutcome>,
    /// Observed scalar loss of `play`.
    pub observed_loss: f64,
    /// Loss-vector estimate fed to the learner (the true vector under full
    /// information).
    pub estimate: Vec<f64>,
    /// Running sum of observed losses through this round.
    pub cumulative_true_loss: f64,
}

/// Complete run: per-round records plus regret accounting against the
/// best-in-hindsight comparator.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub config: RunConfig,
    pub rounds: Vec<RoundRecord>,
    /// Best fixed point in hindsight.
    pub comparator: Vec<f64>,
    /// Total loss of the comparator (affine offsets included).
    pub comparator_value: f64,
    /// Total observed loss of the player.
    pub total_loss: f64,
    pub regret: f64,
}

/// A run aborted mid-flight; the partial trace (no comparator accounting)
/// rides along.
#[derive(Debug, Clone, thiserror::Error)]
#[error("run aborted at round {round}: {source}")]
pub struct RunFailure {
    pub round: usize,
    pub source: Error,
    pub partial: Box<RunTrace>,
}

pub type RunResult = std::result::Result<RunTrace, RunFailure>;

fn abort(
    round: usize,
    source: Error,
    config: &RunConfig,
    rounds: Vec<RoundRecord>,
    total_loss: f64,
) -> RunFailure {
    RunFailure {
        round,
        source,
        partial: Box::new(RunTrace {
            config: config.clone(),
            rounds,
            comparator: Vec::new(),
            comparator_value: f64::NAN,
            total_loss,
            regret: f64::NAN,
        }),
    }
}

/// Exact best-in-hindsight point: the vertex minimizing `cumulative^T v`,
/// lexicographically smallest among ties.
pub fn best_in_hindsight(body: &ConvexPolytope, cumulative: &[f64]) -> Result<(Vec<f64>, f64)> {
    let verts = body.vertices()?;
    if verts.is_empty() {
        return Err(Error::InvalidShape("body has no vertices".into()));
    }
    let mut best = verts[0].clone();
    let mut best_value = linalg::dot(cumulative, &best);
    for v in verts.iter().skip(1) {
        let value = linalg::dot(cumulative, v);
        if value < best_value - 1e-12 * (1.0 + best_value.abs()) {
            best = v.clone();
            best_value = value;
        }
        // Vertices are lexicographically sorted, so ties keep the first.
    }
    Ok((best, best_value))
}

fn loss_bound_check(
    round: usize,
    observed: f64,
    bound: f64,
) -> Result<()> {
    if observed.abs() > bound * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::LossBoundViolated {
            round,
            observed,
            bound,
        });
    }
    Ok(())
}

fn final_accounting(
    env: &dyn Environment,
    body: &ConvexPolytope,
    config: &RunConfig,
    rounds: Vec<RoundRecord>,
    total_loss: f64,
) -> RunResult {
    let n = body.dimension();
    let mut cumulative = vec![0.0; n];
    let mut offsets = 0.0;
    for t in 1..=config.horizon {
        let f = env.loss_vector(t);
        for (c, fi) in cumulative.iter_mut().zip(&f) {
            *c += fi;
        }
        offsets += env.affine_offset(t);
    }
    let (comparator, linear_value) = match best_in_hindsight(body, &cumulative) {
        Ok(v) => v,
        Err(e) => return Err(abort(config.horizon, e, config, rounds, total_loss)),
    };
    let comparator_value = linear_value + offsets;
    Ok(RunTrace {
        config: config.clone(),
        rounds,
        comparator,
        comparator_value,
        total_loss,
        regret: total_loss - comparator_value,
    })
}

/// Runs SCRiBLe: Dikin-boundary sampling, one-point estimation, and
/// barrier-regularized FTRL updates. The environment is queried only for
/// the scalar loss of the played point during the decision loop; full
/// vectors are read afterwards purely for regret accounting.
pub fn run_scrible(
    env: &mut dyn Environment,
    config: &RunConfig,
    barrier: &BarrierOracle,
) -> RunResult {
    let n = barrier.dimension();
    if env.dimension() != n {
        return Err(abort(
            0,
            Error::InvalidConfig(format!(
                "environment dimension {} does not match body dimension {n}",
                env.dimension()
            )),
            config,
            Vec::new(),
            0.0,
        ));
    }
    let eta = match config.resolve_eta(barrier.theta(), n) {
        Ok(v) => v,
        Err(e) => return Err(abort(0, e, config, Vec::new(), 0.0)),
    };
    let enforce_precondition = matches!(config.eta, EtaChoice::Auto);

    let mut x = match analytic_center(barrier) {
        Ok(v) => v,
        Err(e) => return Err(abort(0, e, config, Vec::new(), 0.0)),
    };
    let mut rounds: Vec<RoundRecord> = Vec::with_capacity(config.horizon);
    let mut total_loss = 0.0;
    let mut cumulative_estimate = vec![0.0; n];

    for t in 1..=config.horizon {
        macro_rules! round_try {
            ($e:expr) => {
                match $e {
                    Ok(v) => v,
                    Err(e) => return Err(abort(t, e, config, rounds, total_loss)),
                }
            };
        }

        let hessian = round_try!(barrier.hessian(&x));
        let basis = round_try!(symmetric_eigendecomposition(&hessian));
        let mut rng = RoundRng::new(config.seed, t as u64);
        let outcome = round_try!(sample_dikin_boundary(
            barrier,
            &x,
            &basis,
            config.dikin_radius,
            &mut rng
        ));

        let observed = env.observe(t, &outcome.prediction);
        round_try!(loss_bound_check(t, observed, config.loss_bound));

        let estimate =
            estimate_loss_vector_with_radius(observed, &outcome, &basis, config.dikin_radius);

        // The dual local norm of the estimate must equal n |f^T y| (over
        // the sampling radius); this certifies basis and Hessian agree.
        let dual = round_try!(barrier.dual_local_norm(&x, &estimate));
        let expected_dual = n as f64 * observed.abs() / config.dikin_radius;
        if (dual - expected_dual).abs() > 1e-9 * (1.0 + expected_dual) {
            round_try!(Err(Error::ContractViolation(format!(
                "estimate dual norm {dual} deviates from n|f^T y| = {expected_dual}"
            ))));
        }
        if enforce_precondition && eta * dual > 0.25 + 1e-12 {
            round_try!(Err(Error::ContractViolation(format!(
                "round {t}: eta ||fhat||* = {} exceeds 1/4",
                eta * dual
            ))));
        }

        total_loss += observed;
        for (c, e) in cumulative_estimate.iter_mut().zip(&estimate) {
            *c += e;
        }
        rounds.push(RoundRecord {
            round: t,
            center: x.clone(),
            play: outcome.prediction.clone(),
            outcome: Some(outcome),
            observed_loss: observed,
            estimate,
            cumulative_true_loss: total_loss,
        });

        let objective = Objective::new(linalg::scaled(&cumulative_estimate, eta), barrier);
        x = match config.update_mode {
            UpdateMode::Argmin => {
                round_try!(minimize(&objective, &x, config.newton_tol))
            }
            UpdateMode::SingleNewton => round_try!(damped_newton_step(&objective, &x)),
        };
    }

    final_accounting(env, barrier.domain(), config, rounds, total_loss)
}

/// Full-information FTRL: plays the regularized leader itself and consumes
/// true loss vectors.
pub fn run_ftrl_full_info(
    losses: &[Vec<f64>],
    eta: f64,
    barrier: &BarrierOracle,
    newton_tol: f64,
) -> RunResult {
    let n = barrier.dimension();
    let config = RunConfig {
        horizon: losses.len(),
        eta: EtaChoice::Fixed(eta),
        loss_bound: f64::INFINITY,
        seed: 0,
        algorithm: AlgorithmKind::FtrlFull,
        update_mode: UpdateMode::Argmin,
        pgd_delta: None,
        newton_tol,
        dikin_radius: 1.0,
        allow_condition_violation: false,
    };
    if !(eta > 0.0) {
        return Err(abort(
            0,
            Error::InvalidConfig(format!("eta must be positive, got {eta}")),
            &config,
            Vec::new(),
            0.0,
        ));
    }

    let mut x = match analytic_center(barrier) {
        Ok(v) => v,
        Err(e) => return Err(abort(0, e, &config, Vec::new(), 0.0)),
    };
    let mut rounds = Vec::with_capacity(losses.len());
    let mut total_loss = 0.0;
    let mut cumulative = vec![0.0; n];

    for (idx, f) in losses.iter().enumerate() {
        let t = idx + 1;
        macro_rules! round_try {
            ($e:expr) => {
                match $e {
                    Ok(v) => v,
                    Err(e) => return Err(abort(t, e, &config, rounds, total_loss)),
                }
            };
        }
        if f.len() != n {
            round_try!(Err(Error::InvalidShape(format!(
                "loss vector at round {t} has dimension {}, body has {n}",
                f.len()
            ))));
        }
        let observed = linalg::dot(f, &x);
        total_loss += observed;
        for (c, fi) in cumulative.iter_mut().zip(f) {
            *c += fi;
        }
        rounds.push(RoundRecord {
            round: t,
            center: x.clone(),
            play: x.clone(),
            outcome: None,
            observed_loss: observed,
            estimate: f.clone(),
            cumulative_true_loss: total_loss,
        });
        let objective = Objective::new(linalg::scaled(&cumulative, eta), barrier);
        x = round_try!(minimize(&objective, &x, newton_tol));
    }

    let (comparator, comparator_value) =
        match best_in_hindsight(barrier.domain(), &cumulative) {
            Ok(v) => v,
            Err(e) => return Err(abort(losses.len(), e, &config, rounds, total_loss)),
        };
    Ok(RunTrace {
        config,
        rounds,
        comparator,
        comparator_value,
        total_loss,
        regret: total_loss - comparator_value,
    })
}

/// Axis-aligned box or standard simplex, the shapes BanditPGD can project
/// onto.
#[derive(Debug, Clone)]
pub enum ProjectableBody {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Simplex { dim: usize },
}

impl ProjectableBody {
    /// Recognizes the constraint pattern of a box or standard simplex.
    pub fn detect(body: &ConvexPolytope) -> Option<Self> {
        let n = body.dimension();
        let m = body.num_constraints();
        let a = body.constraint_matrix();
        let b = body.constraint_bounds();

        if m == 2 * n {
            let mut lower = vec![f64::NAN; n];
            let mut upper = vec![f64::NAN; n];
            for i in 0..m {
                let row = a.row(i);
                let nz: Vec<usize> = (0..n).filter(|&j| row[j] != 0.0).collect();
                if nz.len() != 1 {
                    return None;
                }
                let j = nz[0];
                if row[j] == 1.0 && upper[j].is_nan() {
                    upper[j] = b[i];
                } else if row[j] == -1.0 && lower[j].is_nan() {
                    lower[j] = -b[i];
                } else {
                    return None;
                }
            }
            if lower.iter().chain(&upper).all(|v| v.is_finite()) {
                return Some(ProjectableBody::Box { lower, upper });
            }
            return None;
        }

        if m == n + 1 {
            let mut seen_axis = vec![false; n];
            let mut seen_sum = false;
            for i in 0..m {
                let row = a.row(i);
                if row.iter().all(|&v| v == 1.0) && b[i] == 1.0 {
                    if seen_sum {
                        return None;
                    }
                    seen_sum = true;
                    continue;
                }
                let nz: Vec<usize> = (0..n).filter(|&j| row[j] != 0.0).collect();
                if nz.len() == 1 && row[nz[0]] == -1.0 && b[i] == 0.0 && !seen_axis[nz[0]] {
                    seen_axis[nz[0]] = true;
                } else {
                    return None;
                }
            }
            if seen_sum && seen_axis.iter().all(|&s| s) {
                return Some(ProjectableBody::Simplex { dim: n });
            }
        }
        None
    }

    /// Center of the delta-shrunk body.
    fn shrunk_center(&self, delta: f64) -> Vec<f64> {
        match self {
            ProjectableBody::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| 0.5 * (l + u))
                .collect(),
            ProjectableBody::Simplex { dim } => {
                let n = *dim as f64;
                let rest = 1.0 - delta * n.sqrt() - n * delta;
                vec![delta + rest / (n + 1.0); *dim]
            }
        }
    }

    /// Checks the shrunk body is nonempty for this delta.
    fn validate_delta(&self, delta: f64) -> Result<()> {
        match self {
            ProjectableBody::Box { lower, upper } => {
                if lower
                    .iter()
                    .zip(upper)
                    .any(|(l, u)| l + delta >= u - delta)
                {
                    return Err(Error::InvalidConfig(format!(
                        "pgd_delta {delta} collapses the shrunk box"
                    )));
                }
                Ok(())
            }
            ProjectableBody::Simplex { dim } => {
                let n = *dim as f64;
                if delta * (n + n.sqrt()) >= 1.0 {
                    return Err(Error::InvalidConfig(format!(
                        "pgd_delta {delta} collapses the shrunk simplex"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Euclidean projection onto the delta-shrunk body. A point of the
    /// shrunk body stays a sphere radius delta inside the original.
    pub fn project_shrunk(&self, point: &[f64], delta: f64) -> Vec<f64> {
        match self {
            ProjectableBody::Box { lower, upper } => point
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(x, (l, u))| x.clamp(l + delta, u - delta))
                .collect(),
            ProjectableBody::Simplex { dim } => {
                let n = *dim as f64;
                let radius = 1.0 - delta * n.sqrt() - n * delta;
                let shifted: Vec<f64> = point.iter().map(|x| x - delta).collect();
                let projected = project_nonneg_capped(&shifted, radius);
                projected.into_iter().map(|v| v + delta).collect()
            }
        }
    }
}

/// Euclidean projection onto `{v >= 0, sum v <= radius}`.
fn project_nonneg_capped(v: &[f64], radius: f64) -> Vec<f64> {
    let clamped: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    if clamped.iter().sum::<f64>() <= radius {
        return clamped;
    }
    // Project onto the face {v >= 0, sum v = radius}: sort-and-threshold.
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite coordinates"));
    let mut acc = 0.0;
    let mut tau = 0.0;
    for (k, &value) in sorted.iter().enumerate() {
        acc += value;
        let candidate = (acc - radius) / (k as f64 + 1.0);
        if k + 1 == sorted.len() || sorted[k + 1] <= candidate {
            tau = candidate;
            break;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Sphere-smoothed projected gradient descent over the delta-shrunk body.
pub fn run_bandit_pgd(
    env: &mut dyn Environment,
    config: &RunConfig,
    body: &ConvexPolytope,
) -> RunResult {
    let n = body.dimension();
    if env.dimension() != n {
        return Err(abort(
            0,
            Error::InvalidConfig("environment dimension mismatch".into()),
            config,
            Vec::new(),
            0.0,
        ));
    }
    let eta = match config.eta {
        EtaChoice::Fixed(v) if v > 0.0 => v,
        _ => {
            return Err(abort(
                0,
                Error::InvalidConfig("bandit_pgd needs an explicit positive eta".into()),
                config,
                Vec::new(),
                0.0,
            ))
        }
    };
    let delta = match config.pgd_delta {
        Some(d) if d > 0.0 && d < 1.0 => d,
        _ => {
            return Err(abort(
                0,
                Error::InvalidConfig("bandit_pgd needs pgd_delta in (0, 1)".into()),
                config,
                Vec::new(),
                0.0,
            ))
        }
    };
    let shape = match ProjectableBody::detect(body) {
        Some(s) => s,
        None => {
            return Err(abort(
                0,
                Error::InvalidConfig(
                    "bandit_pgd projection supports boxes and simplices only".into(),
                ),
                config,
                Vec::new(),
                0.0,
            ))
        }
    };
    if let Err(e) = shape.validate_delta(delta) {
        return Err(abort(0, e, config, Vec::new(), 0.0));
    }

    let mut x = shape.shrunk_center(delta);
    let mut rounds = Vec::with_capacity(config.horizon);
    let mut total_loss = 0.0;

    for t in 1..=config.horizon {
        macro_rules! round_try {
            ($e:expr) => {
                match $e {
                    Ok(v) => v,
                    Err(e) => return Err(abort(t, e, config, rounds, total_loss)),
                }
            };
        }
        let mut rng = RoundRng::new(config.seed, t as u64);
        let direction = rng.unit_sphere(n);
        let mut play = x.clone();
        linalg::add_scaled(&mut play, delta, &direction);
        if !body.contains_closed(&play, CLOSED_TOL) {
            round_try!(Err(Error::PredictionOutsideBody {
                constraint: 0,
                violation: f64::NAN,
            }));
        }

        let observed = env.observe(t, &play);
        round_try!(loss_bound_check(t, observed, config.loss_bound));

        let estimate = linalg::scaled(&direction, (n as f64 / delta) * observed);
        total_loss += observed;
        rounds.push(RoundRecord {
            round: t,
            center: x.clone(),
            play,
            outcome: None,
            observed_loss: observed,
            estimate: estimate.clone(),
            cumulative_true_loss: total_loss,
        });

        let mut moved = x.clone();
        linalg::add_scaled(&mut moved, -eta, &estimate);
        x = shape.project_shrunk(&moved, delta);
    }

    final_accounting(env, body, config, rounds, total_loss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{FixedSequenceEnv, LossSequence};
    use crate::geometry::make_log_barrier;

    fn interval() -> BarrierOracle {
        make_log_barrier(ConvexPolytope::symmetric_box(1, 1.0).unwrap())
    }

    fn zero_env(n: usize, horizon: usize) -> FixedSequenceEnv {
        let body = ConvexPolytope::symmetric_box(n, 1.0).unwrap();
        let seq = LossSequence::new(vec![vec![0.0; n]; horizon], &body).unwrap();
        FixedSequenceEnv::from_sequence(&seq)
    }

    #[test]
    fn eta_schedule_frozen_value() {
        // sqrt(4 ln(10^4) / (2 * 4 * 10^4)) = 0.021459...
        let eta = theorem_eta(4.0, 2, 1.0, 10_000).unwrap();
        assert!((eta - 0.021459660262893473).abs() < 1e-12);
        assert!((eta - 0.021459).abs() < 1e-5);
    }

    #[test]
    fn eta_schedule_is_homogeneous_in_loss_bound() {
        let e1 = theorem_eta(3.0, 2, 1.0, 512).unwrap();
        let e2 = theorem_eta(3.0, 2, 2.0, 512).unwrap();
        assert!((e2 - e1 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn eta_schedule_rejects_short_horizons() {
        assert!(theorem_eta(2.0, 1, 1.0, 1).is_err());
    }

    #[test]
    fn condition_gate_on_auto_eta() {
        // theta = 2 needs T / log T > 16: T = 32 gives 32/3.46 = 9.2, too small.
        let mut config = RunConfig::scrible(32, 1);
        let barrier = interval();
        assert!(config.resolve_eta(barrier.theta(), 1).is_err());
        config.allow_condition_violation = true;
        assert!(config.resolve_eta(barrier.theta(), 1).is_ok());
        config.horizon = 4096;
        config.allow_condition_violation = false;
        assert!(config.resolve_eta(barrier.theta(), 1).is_ok());
    }

    #[test]
    fn best_in_hindsight_examples() {
        let body = ConvexPolytope::symmetric_box(2, 1.0).unwrap();
        let (u, value) = best_in_hindsight(&body, &[3.0, -1.0]).unwrap();
        assert_eq!(u, vec![-1.0, 1.0]);
        assert_eq!(value, -4.0);

        let (u, value) = best_in_hindsight(&body, &[0.0, 0.0]).unwrap();
        assert_eq!(u, vec![-1.0, -1.0]);
        assert_eq!(value, 0.0);

        let tri = ConvexPolytope::simplex(2).unwrap();
        let (u, value) = best_in_hindsight(&tri, &[-1.0, -2.0]).unwrap();
        assert_eq!(u, vec![0.0, 1.0]);
        assert_eq!(value, -2.0);
    }

    #[test]
    fn scrible_zero_losses_stay_at_center() {
        let barrier = interval();
        let mut env = zero_env(1, 8);
        let mut config = RunConfig::scrible(8, 3);
        config.eta = EtaChoice::Fixed(0.05);
        let trace = run_scrible(&mut env, &config, &barrier).unwrap();
        assert_eq!(trace.rounds.len(), 8);
        assert!(trace.regret.abs() < 1e-12);
        for r in &trace.rounds {
            assert!(r.center[0].abs() < 1e-8);
            assert_eq!(r.observed_loss, 0.0);
        }
    }

    #[test]
    fn scrible_empty_horizon() {
        let barrier = interval();
        let mut env = zero_env(1, 0);
        let mut config = RunConfig::scrible(0, 3);
        config.eta = EtaChoice::Fixed(0.05);
        let trace = run_scrible(&mut env, &config, &barrier).unwrap();
        assert!(trace.rounds.is_empty());
        assert_eq!(trace.regret, 0.0);
    }

    #[test]
    fn scrible_is_deterministic() {
        let body = ConvexPolytope::symmetric_box(2, 1.0).unwrap();
        let barrier = make_log_barrier(body.clone());
        let seq = LossSequence::new(
            vec![vec![0.6, -0.1], vec![-0.2, 0.4], vec![0.3, 0.3]],
            &body,
        )
        .unwrap();
        let mut config = RunConfig::scrible(3, 42);
        config.eta = EtaChoice::Fixed(0.05);

        let mut env1 = FixedSequenceEnv::from_sequence(&seq);
        let mut env2 = FixedSequenceEnv::from_sequence(&seq);
        let t1 = run_scrible(&mut env1, &config, &barrier).unwrap();
        let t2 = run_scrible(&mut env2, &config, &barrier).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn scrible_aborts_on_loss_bound_violation() {
        let body = ConvexPolytope::symmetric_box(1, 1.0).unwrap();
        let barrier = make_log_barrier(body.clone());
        // Sequence exceeding the declared run bound of 0.1.
        let seq = LossSequence::new(vec![vec![0.9]; 4], &body).unwrap();
        let mut env = FixedSequenceEnv::from_sequence(&seq);
        let mut config = RunConfig::scrible(4, 0);
        config.eta = EtaChoice::Fixed(0.05);
        config.loss_bound = 0.1;
        let failure = run_scrible(&mut env, &config, &barrier).unwrap_err();
        assert_eq!(failure.round, 1);
        assert!(matches!(failure.source, Error::LossBoundViolated { .. }));
        assert!(failure.partial.rounds.is_empty());
    }

    #[test]
    fn ftrl_zero_losses_zero_regret() {
        let barrier = interval();
        let losses = vec![vec![0.0]; 5];
        let trace = run_ftrl_full_info(&losses, 0.1, &barrier, 1e-10).unwrap();
        assert!(trace.regret.abs() < 1e-12);
    }

    #[test]
    fn ftrl_first_update_closed_form() {
        // After f_1 = (1), eta = 0.1: x_2 solves 0.1 + 2x/(1-x^2) = 0,
        // i.e. x = 10 - sqrt(101).
        let barrier = interval();
        let losses = vec![vec![1.0], vec![0.0]];
        let trace = run_ftrl_full_info(&losses, 0.1, &barrier, 1e-12).unwrap();
        let expected = 10.0 - 101f64.sqrt();
        assert!((trace.rounds[1].center[0] - expected).abs() < 1e-9);
    }

    #[test]
    fn pgd_zero_losses_zero_regret_and_static_centers() {
        let body = ConvexPolytope::symmetric_box(1, 1.0).unwrap();
        let mut env = zero_env(1, 6);
        let mut config = RunConfig::scrible(6, 9);
        config.algorithm = AlgorithmKind::BanditPgd;
        config.eta = EtaChoice::Fixed(0.01);
        config.pgd_delta = Some(0.1);
        let trace = run_bandit_pgd(&mut env, &config, &body).unwrap();
        assert!(trace.regret.abs() < 1e-12);
        for r in &trace.rounds {
            assert_eq!(r.center, vec![0.0]);
            assert!(r.play[0].abs() <= 0.1 + 1e-12);
        }
    }

    #[test]
    fn pgd_projection_clips_to_shrunk_interval() {
        let body = ConvexPolytope::symmetric_box(1, 1.0).unwrap();
        let shape = ProjectableBody::detect(&body).unwrap();
        let p = shape.project_shrunk(&[1.3], 0.1);
        assert_eq!(p, vec![0.9]);
    }

    #[test]
    fn pgd_rejects_non_projectable_bodies() {
        // A rotated cut makes the body neither box nor simplex.
        let body = ConvexPolytope::with_interior_point(
            vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
                vec![1.0, 1.0],
            ],
            vec![1.0, 1.0, 1.0, 1.0, 1.5],
            vec![0.0, 0.0],
        )
        .unwrap();
        let mut env = zero_env(2, 2);
        let mut config = RunConfig::scrible(2, 0);
        config.algorithm = AlgorithmKind::BanditPgd;
        config.eta = EtaChoice::Fixed(0.01);
        config.pgd_delta = Some(0.05);
        let failure = run_bandit_pgd(&mut env, &config, &body).unwrap_err();
        assert!(matches!(failure.source, Error::InvalidConfig(_)));
    }

    #[test]
    fn simplex_projection_stays_in_shrunk_simplex() {
        let body = ConvexPolytope::simplex(3).unwrap();
        let shape = ProjectableBody::detect(&body).unwrap();
        let delta = 0.05;
        for probe in [
            vec![2.0, -0.3, 0.4],
            vec![0.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.5],
        ] {
            let p = shape.project_shrunk(&probe, delta);
            assert!(p.iter().all(|&v| v >= delta - 1e-12));
            let total: f64 = p.iter().sum();
            assert!(total <= 1.0 - delta * 3f64.sqrt() + 1e-12);
        }
    }

    #[test]
    fn trace_accounting_is_recomputable() {
        let body = ConvexPolytope::symmetric_box(2, 1.0).unwrap();
        let barrier = make_log_barrier(body.clone());
        let seq = LossSequence::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            &body,
        )
        .unwrap();
        let mut env = FixedSequenceEnv::from_sequence(&seq);
        let mut config = RunConfig::scrible(4, 17);
        config.eta = EtaChoice::Fixed(0.02);
        let trace = run_scrible(&mut env, &config, &barrier).unwrap();

        let observed_total: f64 = trace.rounds.iter().map(|r| r.observed_loss).sum();
        assert!((observed_total - trace.total_loss).abs() < 1e-12);
        let mut comparator_total = 0.0;
        for f in seq.vectors() {
            comparator_total += linalg::dot(f, &trace.comparator);
        }
        assert!((trace.regret - (observed_total - comparator_total)).abs() < 1e-9);
    }
}
