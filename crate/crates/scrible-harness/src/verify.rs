//! Barrier verification for a user-supplied body: Dikin containment,
//! the two barrier inequalities, and derivative spot checks.

use scrible_core::{
    linalg, make_log_barrier, verify_barrier_parameter, verify_self_concordance,
    ConvexPolytope, RoundRng,
};

use crate::HarnessError;

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub containment_checks: usize,
    pub containment_failures: usize,
    pub self_concordance_checks: usize,
    pub self_concordance_failures: usize,
    pub barrier_parameter_checks: usize,
    pub barrier_parameter_failures: usize,
    pub derivative_checks: usize,
    pub derivative_failures: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.containment_failures == 0
            && self.self_concordance_failures == 0
            && self.barrier_parameter_failures == 0
            && self.derivative_failures == 0
    }
}

/// Runs `samples` randomized checks of the log barrier on `body`.
pub fn verify_barrier(
    body: &ConvexPolytope,
    samples: usize,
    seed: u64,
) -> Result<VerifyReport, HarnessError> {
    let barrier = make_log_barrier(body.clone());
    let n = body.dimension();
    let mut rng = RoundRng::labeled(seed, 0x56);
    let mut report = VerifyReport::default();

    for _ in 0..samples {
        let x = body.sample_interior(&mut rng, 8);

        // Containment at radius 0.999 (strict) and 1.0 (closed).
        let raw = rng.unit_sphere(n);
        let norm = barrier.local_norm(&x, &raw)?;
        let inside = {
            let mut p = x.clone();
            linalg::add_scaled(&mut p, 0.999 / norm, &raw);
            body.is_strictly_interior(&p)
        };
        let closed = {
            let mut p = x.clone();
            linalg::add_scaled(&mut p, 1.0 / norm, &raw);
            body.contains_closed(&p, 1e-9)
        };
        report.containment_checks += 1;
        if !(inside && closed) {
            report.containment_failures += 1;
        }

        // Barrier inequalities along a fresh direction.
        let h = rng.unit_sphere(n);
        let (lo, hi) = body.chord_range(&x, &h);
        let step = 1e-4 * hi.min(-lo).min(1.0);
        report.self_concordance_checks += 1;
        if !verify_self_concordance(&barrier, &x, &h, step)? {
            report.self_concordance_failures += 1;
        }
        report.barrier_parameter_checks += 1;
        if !verify_barrier_parameter(&barrier, &x, &h)? {
            report.barrier_parameter_failures += 1;
        }

        // Gradient vs central finite differences of the value.
        let min_slack = body.slacks(&x).into_iter().fold(f64::INFINITY, f64::min);
        let fd = 1e-5 * min_slack;
        let grad = barrier.gradient(&x)?;
        for j in 0..n {
            let mut fwd = x.clone();
            fwd[j] += fd;
            let mut bwd = x.clone();
            bwd[j] -= fd;
            let estimate = (barrier.value(&fwd)? - barrier.value(&bwd)?) / (2.0 * fd);
            report.derivative_checks += 1;
            if (estimate - grad[j]).abs() > 1e-5 * (1.0 + grad[j].abs()) {
                report.derivative_failures += 1;
            }
        }
    }
    Ok(report)
}
