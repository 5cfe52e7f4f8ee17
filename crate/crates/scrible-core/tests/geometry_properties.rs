//! Randomized geometry properties: Dikin containment, derivative checks
//! against finite differences, and the barrier inequality verifiers.

use scrible_core::geometry::{
    make_log_barrier, random_body, symmetric_eigendecomposition, verify_barrier_parameter,
    verify_self_concordance,
};
use scrible_core::linalg::{self, Matrix};
use scrible_core::rng::RoundRng;

fn scaled_direction(
    barrier: &scrible_core::geometry::BarrierOracle,
    x: &[f64],
    rng: &mut RoundRng,
    target_norm: f64,
) -> Vec<f64> {
    let raw = rng.unit_sphere(barrier.dimension());
    let norm = barrier.local_norm(x, &raw).unwrap();
    linalg::scaled(&raw, target_norm / norm)
}

#[test]
fn dikin_ball_stays_inside_the_body() {
    let mut rng = RoundRng::labeled(101, 0);
    let mut checked = 0;
    for instance in 0..25 {
        let n = 1 + (instance % 4);
        let body = random_body(n, instance % 3, &mut rng);
        let barrier = make_log_barrier(body.clone());
        for _ in 0..8 {
            let x = body.sample_interior(&mut rng, 10);
            for _ in 0..20 {
                let v = scaled_direction(&barrier, &x, &mut rng, 0.999);
                let mut inside = x.clone();
                linalg::add_scaled(&mut inside, 1.0, &v);
                assert!(
                    body.is_strictly_interior(&inside),
                    "radius 0.999 left the open body"
                );

                let unit = linalg::scaled(&v, 1.0 / 0.999);
                let mut boundary = x.clone();
                linalg::add_scaled(&mut boundary, 1.0, &unit);
                assert!(
                    body.contains_closed(&boundary, 1e-9),
                    "radius 1 left the closed body"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 4000);
}

#[test]
fn gradient_and_hessian_match_value_finite_differences() {
    let mut rng = RoundRng::labeled(102, 0);
    for instance in 0..20 {
        let n = 1 + (instance % 3);
        let body = random_body(n, instance % 2, &mut rng);
        let barrier = make_log_barrier(body.clone());
        let x = body.sample_interior(&mut rng, 10);
        let min_slack = body
            .slacks(&x)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let step = 1e-5 * min_slack;

        let grad = barrier.gradient(&x).unwrap();
        let hess = barrier.hessian(&x).unwrap();
        for j in 0..n {
            let mut fwd = x.clone();
            fwd[j] += step;
            let mut bwd = x.clone();
            bwd[j] -= step;
            let fd_grad =
                (barrier.value(&fwd).unwrap() - barrier.value(&bwd).unwrap()) / (2.0 * step);
            assert!(
                (fd_grad - grad[j]).abs() <= 1e-5 * (1.0 + grad[j].abs()),
                "gradient[{j}] fd mismatch: {fd_grad} vs {}",
                grad[j]
            );

            let g_fwd = barrier.gradient(&fwd).unwrap();
            let g_bwd = barrier.gradient(&bwd).unwrap();
            for k in 0..n {
                let fd_hess = (g_fwd[k] - g_bwd[k]) / (2.0 * step);
                assert!(
                    (fd_hess - hess.at(j, k)).abs() <= 1e-5 * (1.0 + hess.at(j, k).abs()),
                    "hessian[{j}][{k}] fd mismatch"
                );
            }
        }
    }
}

#[test]
fn barrier_inequalities_hold_on_random_instances() {
    let mut rng = RoundRng::labeled(103, 0);
    for instance in 0..100 {
        let n = 1 + (instance % 4);
        let body = random_body(n, instance % 3, &mut rng);
        let barrier = make_log_barrier(body.clone());
        let x = body.sample_interior(&mut rng, 10);
        let h = rng.unit_sphere(n);

        // Slack-scaled step keeps the stencil interior.
        let (lo, hi) = body.chord_range(&x, &h);
        let step = 1e-4 * hi.min(-lo).min(1.0);
        assert!(verify_self_concordance(&barrier, &x, &h, step).unwrap());
        assert!(verify_barrier_parameter(&barrier, &x, &h).unwrap());
    }
}

#[test]
fn eigenbasis_reconstructs_and_is_orthonormal() {
    let mut rng = RoundRng::labeled(104, 0);
    for instance in 0..50 {
        let n = 1 + (instance % 6);
        // Random SPD matrix M^T M + 0.1 I.
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, rng.uniform_in(-1.0, 1.0));
            }
        }
        let mut spd = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += m.at(k, i) * m.at(k, j);
                }
                spd.set(i, j, s + if i == j { 0.1 } else { 0.0 });
            }
        }
        let basis = symmetric_eigendecomposition(&spd).unwrap();
        let rebuilt = basis.reconstruct();

        let mut diff = 0.0;
        for i in 0..n {
            for j in 0..n {
                diff += (rebuilt.at(i, j) - spd.at(i, j)).powi(2);
            }
        }
        let rel = diff.sqrt() / spd.frobenius_norm();
        assert!(rel <= 1e-10, "reconstruction error {rel}");

        for i in 0..n {
            for j in 0..n {
                let dot = linalg::dot(basis.eigenvector(i), basis.eigenvector(j));
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() <= 1e-10);
            }
        }
        // Descending order.
        for w in basis.eigenvalues().windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}

#[test]
fn barrier_value_diverges_along_a_ray() {
    let mut rng = RoundRng::labeled(105, 0);
    let body = random_body(2, 1, &mut rng);
    let barrier = make_log_barrier(body.clone());
    let x = body.interior_point().to_vec();
    let d = rng.unit_sphere(2);
    let (_, hi) = body.chord_range(&x, &d);

    // Values along the ray eventually increase monotonically and exceed
    // any threshold.
    let start_value = barrier.value(&x).unwrap();
    let mut last = f64::NEG_INFINITY;
    let mut increasing_tail = true;
    let mut max_value = f64::NEG_INFINITY;
    for k in 1..=60 {
        let frac = 1.0 - 2f64.powi(-k);
        let mut p = x.clone();
        linalg::add_scaled(&mut p, frac * hi, &d);
        if !body.is_strictly_interior(&p) {
            break;
        }
        let v = barrier.value(&p).unwrap();
        if k > 5 && v < last {
            increasing_tail = false;
        }
        last = v;
        max_value = max_value.max(v);
    }
    assert!(increasing_tail);
    // The walk stops at slack ~1e-12, where -log(slack) dominates.
    assert!(max_value > start_value + 15.0);
}
