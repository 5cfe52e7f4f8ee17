//! Exact-enumeration oracle for the bandit reduction identity.
//!
//! Over a short horizon every `(axis, sign)` branch of the sampler is
//! enumerated with probability `1/(2n)` per round. Two expectations are
//! computed against the same best-in-hindsight comparator of the true
//! sequence:
//!
//! - lhs: expected regret of the randomized bandit player on the true
//!   vectors, charging the played boundary points;
//! - rhs: expected regret of deterministic FTRL on each branch's estimate
//!   sequence, charging the centers.
//!
//! Unbiasedness of the sampler and estimator makes the two equal; the
//! check is exact up to floating-point accumulation.

use scrible_core::{
    best_in_hindsight, dikin_outcome, estimate_loss_vector, linalg, minimize,
    symmetric_eigendecomposition, BarrierOracle, Objective,
};

use crate::HarnessError;

const MAX_BRANCHES: usize = 100_000;

#[derive(Debug, Clone)]
pub struct ReductionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub difference: f64,
    pub branches: usize,
    pub equal: bool,
}

pub const REDUCTION_TOL: f64 = 1e-9;

struct Enumerator<'a> {
    losses: &'a [Vec<f64>],
    barrier: &'a BarrierOracle,
    eta: f64,
    newton_tol: f64,
    comparator: Vec<f64>,
    comparator_true_loss: f64,
    lhs: f64,
    rhs: f64,
    branches: usize,
}

impl Enumerator<'_> {
    /// Depth-first over rounds; the branch probability is accumulated as
    /// `prob` and all per-branch sums are carried along the prefix.
    fn descend(
        &mut self,
        round: usize,
        x: &[f64],
        cumulative_estimate: &[f64],
        prob: f64,
        played_true_loss: f64,
        estimate_on_centers: f64,
        estimate_on_comparator: f64,
    ) -> Result<(), HarnessError> {
        if round == self.losses.len() {
            self.lhs += prob * (played_true_loss - self.comparator_true_loss);
            self.rhs += prob * (estimate_on_centers - estimate_on_comparator);
            self.branches += 1;
            return Ok(());
        }

        let n = self.barrier.dimension();
        let f = &self.losses[round];
        let hessian = self.barrier.hessian(x)?;
        let basis = symmetric_eigendecomposition(&hessian)?;
        let branch_prob = prob / (2 * n) as f64;

        for axis in 0..n {
            for &sign in &[1.0, -1.0] {
                let outcome = dikin_outcome(self.barrier, x, &basis, axis, sign, 1.0)?;
                let observed = linalg::dot(f, &outcome.prediction);
                let estimate = estimate_loss_vector(observed, &outcome, &basis);

                let mut next_cumulative = cumulative_estimate.to_vec();
                for (c, e) in next_cumulative.iter_mut().zip(&estimate) {
                    *c += e;
                }
                let objective = Objective::new(
                    linalg::scaled(&next_cumulative, self.eta),
                    self.barrier,
                );
                let next_x = minimize(&objective, x, self.newton_tol)?;

                self.descend(
                    round + 1,
                    &next_x,
                    &next_cumulative,
                    branch_prob,
                    played_true_loss + observed,
                    estimate_on_centers + linalg::dot(&estimate, x),
                    estimate_on_comparator + linalg::dot(&estimate, &self.comparator),
                )?;
            }
        }
        Ok(())
    }
}

/// Enumerates every sampler branch and compares the two regret
/// expectations. Guarded to `(2n)^T <= 100000` branches.
pub fn enumerate_reduction_check(
    losses: &[Vec<f64>],
    barrier: &BarrierOracle,
    eta: f64,
    newton_tol: f64,
) -> Result<ReductionCheck, HarnessError> {
    let n = barrier.dimension();
    let horizon = losses.len() as u32;
    let branches = (2 * n).checked_pow(horizon).filter(|&b| b <= MAX_BRANCHES);
    if branches.is_none() {
        return Err(HarnessError::Config(format!(
            "(2n)^T = (2*{n})^{horizon} exceeds the {MAX_BRANCHES}-branch guard"
        )));
    }
    if !(eta > 0.0) {
        return Err(HarnessError::Config("eta must be positive".into()));
    }

    let mut cumulative_true = vec![0.0; n];
    for f in losses {
        if f.len() != n {
            return Err(HarnessError::Config(
                "loss vector dimension does not match the body".into(),
            ));
        }
        for (c, fi) in cumulative_true.iter_mut().zip(f) {
            *c += fi;
        }
    }
    let (comparator, comparator_true_loss) =
        best_in_hindsight(barrier.domain(), &cumulative_true)?;

    let start = scrible_core::analytic_center(barrier)?;
    let mut enumerator = Enumerator {
        losses,
        barrier,
        eta,
        newton_tol,
        comparator,
        comparator_true_loss,
        lhs: 0.0,
        rhs: 0.0,
        branches: 0,
    };
    enumerator.descend(0, &start, &vec![0.0; n], 1.0, 0.0, 0.0, 0.0)?;

    let difference = (enumerator.lhs - enumerator.rhs).abs();
    Ok(ReductionCheck {
        lhs: enumerator.lhs,
        rhs: enumerator.rhs,
        difference,
        branches: enumerator.branches,
        equal: difference <= REDUCTION_TOL,
    })
}
