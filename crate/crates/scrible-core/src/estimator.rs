//! Dikin-ellipsoid boundary sampling and the one-point unbiased loss
//! estimator.
//!
//! A round samples an eigenvector axis `i` uniformly and a sign `eps`
//! uniformly, plays `y = x + eps * lambda_i^{-1/2} e_i` (local norm exactly
//! the sampling radius), and turns the observed scalar `f^T y` into
//! `fhat = n * (f^T y) * eps * lambda_i^{1/2} e_i`.
//!
//! Averaging `fhat` over all `2n` equiprobable outcomes reproduces `f`
//! exactly: the sign average isolates `2 lambda_i^{-1/2} (f^T e_i)` per
//! axis and the eigenbasis is complete. The leading factor is the
//! dimension `n`; that factor is what makes the estimator unbiased, and
//! the enumeration tests guard it.

use crate::error::{Error, Result};
use crate::geometry::{BarrierOracle, EigenBasis, CLOSED_TOL};
use crate::linalg;
use crate::rng::RoundRng;

/// Default sampling radius; the algorithm samples the unit Dikin boundary.
pub const FULL_RADIUS: f64 = 1.0;

/// One sampled round: axis, sign, played point and the axis eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutcome {
    /// Sampled eigenvector index (0-based).
    pub axis: usize,
    /// Sampled sign, +1.0 or -1.0.
    pub sign: f64,
    /// Played point `y = x + sign * radius * lambda^{-1/2} e`.
    pub prediction: Vec<f64>,
    /// Eigenvalue of the sampled axis.
    pub offset_eigenvalue: f64,
}

impl SampleOutcome {
    /// Recovers the sampling center from the stored fields.
    pub fn reconstruct_center(&self, basis: &EigenBasis, radius: f64) -> Vec<f64> {
        let e = basis.eigenvector(self.axis);
        let scale = self.sign * radius / self.offset_eigenvalue.sqrt();
        self.prediction
            .iter()
            .zip(e)
            .map(|(y, c)| y - scale * c)
            .collect()
    }
}

/// Deterministic outcome for a chosen `(axis, sign)`, validated against the
/// barrier: the played point must lie in the closed body and sit at local
/// norm `radius` from the center.
pub fn dikin_outcome(
    barrier: &BarrierOracle,
    x: &[f64],
    basis: &EigenBasis,
    axis: usize,
    sign: f64,
    radius: f64,
) -> Result<SampleOutcome> {
    debug_assert!(sign == 1.0 || sign == -1.0);
    debug_assert!(radius > 0.0 && radius <= 1.0);
    let lambda = basis.eigenvalues()[axis];
    let e = basis.eigenvector(axis);
    let scale = sign * radius / lambda.sqrt();
    let mut prediction = x.to_vec();
    linalg::add_scaled(&mut prediction, scale, e);

    let body = barrier.domain();
    if !body.contains_closed(&prediction, CLOSED_TOL) {
        let slacks = body.slacks(&prediction);
        let (constraint, worst) = slacks
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite slack"))
            .expect("nonempty constraint set");
        return Err(Error::PredictionOutsideBody {
            constraint,
            violation: -worst,
        });
    }
    let offset: Vec<f64> = prediction.iter().zip(x).map(|(y, c)| y - c).collect();
    let norm = barrier.local_norm(x, &offset)?;
    if (norm - radius).abs() > 1e-9 {
        return Err(Error::PredictionOutsideBody {
            constraint: axis,
            violation: (norm - radius).abs(),
        });
    }
    Ok(SampleOutcome {
        axis,
        sign,
        prediction,
        offset_eigenvalue: lambda,
    })
}

/// Samples the Dikin boundary: axis uniform on `0..n`, then sign uniform on
/// `{+1, -1}`, drawn in that order from the round stream.
pub fn sample_dikin_boundary(
    barrier: &BarrierOracle,
    x: &[f64],
    basis: &EigenBasis,
    radius: f64,
    rng: &mut RoundRng,
) -> Result<SampleOutcome> {
    let axis = rng.uniform_index(basis.dimension());
    let sign = rng.uniform_sign();
    dikin_outcome(barrier, x, basis, axis, sign, radius)
}

/// One-point estimate `n * observed * sign * lambda^{1/2} e`.
pub fn estimate_loss_vector(
    observed_loss: f64,
    outcome: &SampleOutcome,
    basis: &EigenBasis,
) -> Vec<f64> {
    estimate_loss_vector_with_radius(observed_loss, outcome, basis, FULL_RADIUS)
}

/// Estimate under a shrunk sampling radius; the `1/radius` factor keeps
/// the expectation equal to the true loss vector.
pub fn estimate_loss_vector_with_radius(
    observed_loss: f64,
    outcome: &SampleOutcome,
    basis: &EigenBasis,
    radius: f64,
) -> Vec<f64> {
    let n = basis.dimension() as f64;
    let coeff = (n / radius) * observed_loss * outcome.sign * outcome.offset_eigenvalue.sqrt();
    basis
        .eigenvector(outcome.axis)
        .iter()
        .map(|c| coeff * c)
        .collect()
}

/// Averages the estimator over all `2n` equiprobable outcomes for the true
/// loss vector `f`; equals `f` exactly up to rounding. This is the
/// enumeration oracle behind the unbiasedness tests.
pub fn average_estimate_over_outcomes(
    barrier: &BarrierOracle,
    x: &[f64],
    basis: &EigenBasis,
    f: &[f64],
    radius: f64,
) -> Result<Vec<f64>> {
    let n = basis.dimension();
    let mut avg = vec![0.0; n];
    for axis in 0..n {
        for &sign in &[1.0, -1.0] {
            let outcome = dikin_outcome(barrier, x, basis, axis, sign, radius)?;
            let observed = linalg::dot(f, &outcome.prediction);
            let est = estimate_loss_vector_with_radius(observed, &outcome, basis, radius);
            for (a, e) in avg.iter_mut().zip(&est) {
                *a += e / (2.0 * n as f64);
            }
        }
    }
    Ok(avg)
}
