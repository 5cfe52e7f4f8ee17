//! Damped Newton minimization of barrier-regularized linear objectives
//! `F(x) = g^T x + R(x)`.
//!
//! The step size is the classical `1/(1 + lambda(x))` with
//! `lambda(x) = sqrt(grad^T H^{-1} grad)` (the Newton decrement), which for
//! self-concordant `F` keeps every iterate inside the domain and descends
//! monotonically. Solves go through a Cholesky factorization; the Hessian
//! is never inverted explicitly.

use crate::error::{Error, Result};
use crate::geometry::BarrierOracle;
use crate::linalg;

/// Barrier-regularized linear objective `F(x) = linear^T x + R(x)`.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    linear: Vec<f64>,
    barrier: &'a BarrierOracle,
}

impl<'a> Objective<'a> {
    pub fn new(linear: Vec<f64>, barrier: &'a BarrierOracle) -> Self {
        debug_assert_eq!(linear.len(), barrier.dimension());
        Objective { linear, barrier }
    }

    /// Pure barrier objective (zero linear term).
    pub fn barrier_only(barrier: &'a BarrierOracle) -> Self {
        Objective {
            linear: vec![0.0; barrier.dimension()],
            barrier,
        }
    }

    pub fn barrier(&self) -> &BarrierOracle {
        self.barrier
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(linalg::dot(&self.linear, x) + self.barrier.value(x)?)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.barrier.gradient(x)?;
        for (gi, li) in g.iter_mut().zip(&self.linear) {
            *gi += li;
        }
        Ok(g)
    }
}

/// One damped Newton step together with its diagnostics.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub point: Vec<f64>,
    pub decrement: f64,
    /// Step halvings needed to restore strict interiority; zero in exact
    /// arithmetic, nonzero only under rounding.
    pub halvings: u32,
}

fn newton_direction(obj: &Objective, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let grad = obj.gradient(x)?;
    let hess = obj.barrier().hessian(x)?;
    let dir = linalg::solve_spd(&hess, &grad)?;
    let decrement = linalg::dot(&grad, &dir).max(0.0).sqrt();
    Ok((dir, decrement))
}

/// Newton decrement `lambda(x) = sqrt(grad F^T H^{-1} grad F)`.
pub fn newton_decrement(obj: &Objective, x: &[f64]) -> Result<f64> {
    Ok(newton_direction(obj, x)?.1)
}

/// One damped step `x - H^{-1} grad F / (1 + lambda)`.
pub fn damped_newton_step(obj: &Objective, x: &[f64]) -> Result<Vec<f64>> {
    Ok(damped_newton_step_outcome(obj, x)?.point)
}

/// Damped step with decrement and backtracking diagnostics.
pub fn damped_newton_step_outcome(obj: &Objective, x: &[f64]) -> Result<StepOutcome> {
    let (dir, decrement) = newton_direction(obj, x)?;
    let body = obj.barrier().domain();
    let mut scale = 1.0 / (1.0 + decrement);
    let mut halvings = 0u32;
    loop {
        let mut next = x.to_vec();
        linalg::add_scaled(&mut next, -scale, &dir);
        if body.is_strictly_interior(&next) {
            return Ok(StepOutcome {
                point: next,
                decrement,
                halvings,
            });
        }
        halvings += 1;
        if halvings > 80 {
            return Err(Error::NoConvergence {
                iterations: halvings as usize,
                last_decrement: decrement,
            });
        }
        scale *= 0.5;
    }
}

const MAX_NEWTON_STEPS: usize = 200;

/// Result of a full minimization.
#[derive(Debug, Clone)]
pub struct MinimizeReport {
    pub point: Vec<f64>,
    pub steps: usize,
    pub final_decrement: f64,
    pub total_halvings: u32,
}

/// Minimizes `F` from `start` until the Newton decrement is at most `tol`.
pub fn minimize(obj: &Objective, start: &[f64], tol: f64) -> Result<Vec<f64>> {
    Ok(minimize_report(obj, start, tol)?.point)
}

/// Like [`minimize`] but reports step and backtracking counts.
pub fn minimize_report(obj: &Objective, start: &[f64], tol: f64) -> Result<MinimizeReport> {
    obj.barrier().domain().check_strictly_interior(start)?;
    let mut x = start.to_vec();
    let mut total_halvings = 0u32;
    let mut last_decrement = f64::INFINITY;
    for step in 0..MAX_NEWTON_STEPS {
        let (dir, decrement) = newton_direction(obj, &x)?;
        last_decrement = decrement;
        if decrement <= tol {
            return Ok(MinimizeReport {
                point: x,
                steps: step,
                final_decrement: decrement,
                total_halvings,
            });
        }
        let body = obj.barrier().domain();
        let mut scale = 1.0 / (1.0 + decrement);
        let mut halvings = 0u32;
        loop {
            let mut next = x.clone();
            linalg::add_scaled(&mut next, -scale, &dir);
            if body.is_strictly_interior(&next) {
                x = next;
                break;
            }
            halvings += 1;
            if halvings > 80 {
                return Err(Error::NoConvergence {
                    iterations: step,
                    last_decrement: decrement,
                });
            }
            scale *= 0.5;
        }
        total_halvings += halvings;
    }
    Err(Error::NoConvergence {
        iterations: MAX_NEWTON_STEPS,
        last_decrement,
    })
}

/// Default Newton decrement tolerance for FTRL updates.
pub const DEFAULT_NEWTON_TOL: f64 = 1e-8;

/// Analytic center `argmin_x R(x)`, started from the body's certified
/// interior point.
pub fn analytic_center(barrier: &BarrierOracle) -> Result<Vec<f64>> {
    let obj = Objective::barrier_only(barrier);
    minimize(&obj, barrier.domain().interior_point(), DEFAULT_NEWTON_TOL)
}
