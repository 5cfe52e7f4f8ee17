//! Convex bodies and self-concordant barrier calculus.
//!
//! A decision set is a bounded polytope `{x : Ax <= b}` with nonempty
//! interior. The regularizer is the logarithmic barrier
//! `R(x) = -sum_i log(b_i - a_i^T x)` with barrier parameter `theta = m`
//! (the constraint count). Its Hessian induces the local norm
//! `||v||_x = sqrt(v^T H(x) v)` whose unit ball is the Dikin ellipsoid,
//! always contained in the body.
//!
//! Besides evaluation, this module ships numerical verifiers for the two
//! defining barrier inequalities (third-derivative control and the
//! theta-barrier gradient bound), so any barrier instance can be checked
//! rather than trusted.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rng::RoundRng;

/// Relative slack below which a point counts as touching the boundary.
const STRICT_TOL: f64 = 1e-12;

/// Tolerance for membership in the closed body.
pub const CLOSED_TOL: f64 = 1e-9;

fn strict_threshold(bound: f64) -> f64 {
    STRICT_TOL * (1.0 + bound.abs())
}

/// Bounded polytope `{x : Ax <= b}` with a certified interior point.
#[derive(Debug, Clone)]
pub struct ConvexPolytope {
    constraint_matrix: Matrix,
    constraint_bounds: Vec<f64>,
    dimension: usize,
    interior_point: Vec<f64>,
}

impl ConvexPolytope {
    /// Builds the polytope, checking shape, boundedness and nonempty
    /// interior. The interior check finds a strictly feasible point by
    /// centering in a relaxed body `Ax <= b + mu` while shrinking `mu`.
    pub fn new(rows: Vec<Vec<f64>>, bounds: Vec<f64>) -> Result<Self> {
        let a = Matrix::from_rows(&rows)?;
        Self::validate_shape(&a, &bounds)?;
        Self::check_bounded(&a)?;
        let witness = find_interior_point(&a, &bounds)?;
        Ok(ConvexPolytope {
            dimension: a.cols(),
            constraint_matrix: a,
            constraint_bounds: bounds,
            interior_point: witness,
        })
    }

    /// Builds the polytope from constraints plus a known strictly interior
    /// point, skipping the interior search.
    pub fn with_interior_point(
        rows: Vec<Vec<f64>>,
        bounds: Vec<f64>,
        witness: Vec<f64>,
    ) -> Result<Self> {
        let a = Matrix::from_rows(&rows)?;
        Self::validate_shape(&a, &bounds)?;
        Self::check_bounded(&a)?;
        let body = ConvexPolytope {
            dimension: a.cols(),
            constraint_matrix: a,
            constraint_bounds: bounds,
            interior_point: witness,
        };
        body.check_strictly_interior(&body.interior_point)?;
        Ok(body)
    }

    /// Axis-aligned box `lower_j <= x_j <= upper_j`.
    pub fn axis_box(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let n = lower.len();
        if upper.len() != n || n == 0 {
            return Err(Error::InvalidShape("box bounds length mismatch".into()));
        }
        if lower.iter().zip(upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidShape("box needs lower < upper".into()));
        }
        let mut rows = Vec::with_capacity(2 * n);
        let mut bounds = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut up = vec![0.0; n];
            up[j] = 1.0;
            rows.push(up);
            bounds.push(upper[j]);
            let mut lo = vec![0.0; n];
            lo[j] = -1.0;
            rows.push(lo);
            bounds.push(-lower[j]);
        }
        let center: Vec<f64> = lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect();
        Self::with_interior_point(rows, bounds, center)
    }

    /// Symmetric box `[-r, r]^n`.
    pub fn symmetric_box(n: usize, r: f64) -> Result<Self> {
        Self::axis_box(&vec![-r; n], &vec![r; n])
    }

    /// Standard simplex `{x : x_j >= 0, sum_j x_j <= 1}` in `n` dimensions.
    pub fn simplex(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("simplex needs n >= 1".into()));
        }
        let mut rows = Vec::with_capacity(n + 1);
        let mut bounds = Vec::with_capacity(n + 1);
        for j in 0..n {
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            rows.push(row);
            bounds.push(0.0);
        }
        rows.push(vec![1.0; n]);
        bounds.push(1.0);
        let center = vec![1.0 / (n as f64 + 1.0); n];
        Self::with_interior_point(rows, bounds, center)
    }

    fn validate_shape(a: &Matrix, bounds: &[f64]) -> Result<()> {
        if a.cols() == 0 || a.rows() == 0 {
            return Err(Error::InvalidShape("empty constraint system".into()));
        }
        if bounds.len() != a.rows() {
            return Err(Error::InvalidShape(format!(
                "{} constraint rows but {} bounds",
                a.rows(),
                bounds.len()
            )));
        }
        if a.row(0).iter().count() != a.cols() {
            return Err(Error::InvalidShape("ragged constraint matrix".into()));
        }
        let finite = (0..a.rows()).all(|i| a.row(i).iter().all(|v| v.is_finite()))
            && bounds.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidShape("non-finite constraint data".into()));
        }
        // A zero row encodes either a vacuous or an infeasible "0 <= b_i".
        for i in 0..a.rows() {
            if a.row(i).iter().all(|&v| v == 0.0) {
                return Err(Error::InvalidShape(format!("zero constraint row {i}")));
            }
        }
        Ok(())
    }

    /// Probes coordinate axes and a fixed set of pseudo-random directions
    /// for recession directions (d with Ad <= 0 componentwise).
    fn check_bounded(a: &Matrix) -> Result<()> {
        let n = a.cols();
        let mut probes: Vec<Vec<f64>> = Vec::with_capacity(4 * n);
        for j in 0..n {
            let mut d = vec![0.0; n];
            d[j] = 1.0;
            probes.push(d.clone());
            d[j] = -1.0;
            probes.push(d);
        }
        let mut rng = RoundRng::labeled(0xB0D1, (n as u64) << 16 | a.rows() as u64);
        for _ in 0..2 * n {
            probes.push(rng.unit_sphere(n));
        }
        for d in &probes {
            let escapes = (0..a.rows()).all(|i| linalg::dot(a.row(i), d) <= 1e-12);
            if escapes {
                return Err(Error::Unbounded);
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_constraints(&self) -> usize {
        self.constraint_matrix.rows()
    }

    pub fn constraint_matrix(&self) -> &Matrix {
        &self.constraint_matrix
    }

    pub fn constraint_bounds(&self) -> &[f64] {
        &self.constraint_bounds
    }

    /// A strictly interior point certified at construction.
    pub fn interior_point(&self) -> &[f64] {
        &self.interior_point
    }

    /// Constraint slacks `b_i - a_i^T x`.
    pub fn slacks(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_constraints())
            .map(|i| self.constraint_bounds[i] - linalg::dot(self.constraint_matrix.row(i), x))
            .collect()
    }

    pub fn is_strictly_interior(&self, x: &[f64]) -> bool {
        x.len() == self.dimension
            && self
                .slacks(x)
                .iter()
                .zip(&self.constraint_bounds)
                .all(|(&s, &b)| s > strict_threshold(b))
    }

    pub fn check_strictly_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::InvalidShape(format!(
                "point has dimension {}, body has {}",
                x.len(),
                self.dimension
            )));
        }
        let slacks = self.slacks(x);
        let mut worst = (0usize, f64::INFINITY);
        for (i, &s) in slacks.iter().enumerate() {
            let margin = s - strict_threshold(self.constraint_bounds[i]);
            if margin < worst.1 {
                worst = (i, margin);
            }
        }
        if worst.1 <= 0.0 {
            return Err(Error::NotInterior {
                constraint: worst.0,
                slack: slacks[worst.0],
            });
        }
        Ok(())
    }

    /// Membership in the closed body up to an absolute slack tolerance.
    pub fn contains_closed(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dimension && self.slacks(x).iter().all(|&s| s >= -tol)
    }

    /// All vertices (feasible basic solutions), deduplicated and sorted
    /// lexicographically. Deterministic for identical input.
    pub fn vertices(&self) -> Result<Vec<Vec<f64>>> {
        let m = self.num_constraints();
        let n = self.dimension;
        let mut combos: u128 = 1;
        for k in 0..n {
            combos = combos.saturating_mul((m - k) as u128) / (k as u128 + 1);
        }
        if combos > 1_000_000 {
            return Err(Error::SizeLimit(format!(
                "C({m},{n}) = {combos} candidate bases exceeds 1e6"
            )));
        }

        if m < n {
            return Ok(Vec::new());
        }
        let mut verts: Vec<Vec<f64>> = Vec::new();
        let mut subset: Vec<usize> = (0..n).collect();
        loop {
            let rows: Vec<Vec<f64>> = subset
                .iter()
                .map(|&i| self.constraint_matrix.row(i).to_vec())
                .collect();
            let rhs: Vec<f64> = subset.iter().map(|&i| self.constraint_bounds[i]).collect();
            if let Ok(sys) = Matrix::from_rows(&rows) {
                if let Some(x) = linalg::solve_square(&sys, &rhs) {
                    let feasible = self
                        .slacks(&x)
                        .iter()
                        .zip(&self.constraint_bounds)
                        .all(|(&s, &b)| s >= -CLOSED_TOL * (1.0 + b.abs()));
                    if feasible {
                        let dup = verts.iter().any(|v| {
                            v.iter()
                                .zip(&x)
                                .all(|(a, b)| (a - b).abs() <= 1e-9)
                        });
                        if !dup {
                            verts.push(x);
                        }
                    }
                }
            }
            // Advance to the next n-subset of {0..m} in lexicographic order.
            let mut k = n;
            while k > 0 && subset[k - 1] == m - n + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            subset[k - 1] += 1;
            for j in k..n {
                subset[j] = subset[j - 1] + 1;
            }
        }
        verts.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(verts)
    }

    /// Hit-and-run walk from the stored interior point; returns a strictly
    /// interior sample. Deterministic given the rng state.
    pub fn sample_interior(&self, rng: &mut RoundRng, steps: usize) -> Vec<f64> {
        let mut x = self.interior_point.clone();
        for _ in 0..steps.max(1) {
            let d = rng.unit_sphere(self.dimension);
            let (lo, hi) = self.chord_range(&x, &d);
            if !(hi - lo).is_finite() || hi - lo <= 0.0 {
                continue;
            }
            let t = rng.uniform_in(lo * 0.95, hi * 0.95);
            linalg::add_scaled(&mut x, t, &d);
        }
        x
    }

    /// Step range (t_min, t_max) keeping `x + t d` inside the open body.
    pub fn chord_range(&self, x: &[f64], d: &[f64]) -> (f64, f64) {
        let mut hi = f64::INFINITY;
        let mut lo = f64::NEG_INFINITY;
        let slacks = self.slacks(x);
        for i in 0..self.num_constraints() {
            let ad = linalg::dot(self.constraint_matrix.row(i), d);
            if ad > 1e-300 {
                hi = hi.min(slacks[i] / ad);
            } else if ad < -1e-300 {
                lo = lo.max(slacks[i] / ad);
            }
        }
        (lo, hi)
    }
}

/// Finds a strictly interior point of `{x : Ax <= b}` or proves the
/// interior empty, by analytic centering in relaxed bodies `Ax <= b + mu`
/// with `mu` shrinking toward zero.
fn find_interior_point(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.cols();
    let m = a.rows();
    let mut x = vec![0.0; n];

    let slack_at = |x: &[f64], i: usize| b[i] - linalg::dot(a.row(i), x);
    let strictly_inside = |x: &[f64]| (0..m).all(|i| slack_at(x, i) > strict_threshold(b[i]));

    if strictly_inside(&x) {
        return Ok(x);
    }

    let worst = (0..m)
        .map(|i| -slack_at(&x, i))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut mu = worst + 1.0;

    for _ in 0..200 {
        center_relaxed(a, b, mu, &mut x)?;
        if strictly_inside(&x) {
            return Ok(x);
        }
        let deficit = (0..m)
            .map(|i| -slack_at(&x, i))
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0);
        let next = 0.5 * (mu + deficit);
        if mu - next <= 1e-14 * (1.0 + mu) {
            return Err(Error::EmptyInterior);
        }
        mu = next;
    }
    Err(Error::EmptyInterior)
}

/// Damped Newton centering for `-sum_i log(b_i + mu - a_i^T x)`.
fn center_relaxed(a: &Matrix, b: &[f64], mu: f64, x: &mut [f64]) -> Result<()> {
    let n = a.cols();
    let m = a.rows();
    for _ in 0..500 {
        let mut grad = vec![0.0; n];
        let mut hess = Matrix::zeros(n, n);
        for i in 0..m {
            let s = b[i] + mu - linalg::dot(a.row(i), x);
            if s <= 0.0 {
                return Err(Error::EmptyInterior);
            }
            let row = a.row(i);
            let inv = 1.0 / s;
            for j in 0..n {
                grad[j] += row[j] * inv;
                for k in j..n {
                    hess.add_at(j, k, row[j] * row[k] * inv * inv);
                }
            }
        }
        for j in 0..n {
            for k in (j + 1)..n {
                let v = hess.at(j, k);
                hess.set(k, j, v);
            }
        }
        let dir = linalg::solve_spd(&hess, &grad)?;
        let decrement = linalg::dot(&grad, &dir).max(0.0).sqrt();
        if decrement <= 0.25 {
            return Ok(());
        }
        let step = 1.0 / (1.0 + decrement);
        linalg::add_scaled(x, -step, &dir);
    }
    Ok(())
}

/// Self-concordant barrier with exact value/gradient/Hessian evaluation.
///
/// The only instantiation is the logarithmic barrier of a polytope, with
/// `theta = m`, gradient `sum_i a_i / s_i` and Hessian
/// `sum_i a_i a_i^T / s_i^2` where `s_i = b_i - a_i^T x`.
#[derive(Debug, Clone)]
pub struct BarrierOracle {
    theta: f64,
    domain: ConvexPolytope,
}

/// Builds the logarithmic barrier for a polytope; `theta` equals the
/// number of constraints.
pub fn make_log_barrier(domain: ConvexPolytope) -> BarrierOracle {
    BarrierOracle {
        theta: domain.num_constraints() as f64,
        domain,
    }
}

impl BarrierOracle {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn domain(&self) -> &ConvexPolytope {
        &self.domain
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    fn checked_slacks(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain.check_strictly_interior(x)?;
        Ok(self.domain.slacks(x))
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let slacks = self.checked_slacks(x)?;
        Ok(-slacks.iter().map(|s| s.ln()).sum::<f64>())
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let slacks = self.checked_slacks(x)?;
        let n = self.dimension();
        let a = self.domain.constraint_matrix();
        let mut g = vec![0.0; n];
        for (i, &s) in slacks.iter().enumerate() {
            let row = a.row(i);
            let inv = 1.0 / s;
            for j in 0..n {
                g[j] += row[j] * inv;
            }
        }
        Ok(g)
    }

    pub fn hessian(&self, x: &[f64]) -> Result<Matrix> {
        let slacks = self.checked_slacks(x)?;
        let n = self.dimension();
        let a = self.domain.constraint_matrix();
        let mut h = Matrix::zeros(n, n);
        for (i, &s) in slacks.iter().enumerate() {
            let row = a.row(i);
            let w = 1.0 / (s * s);
            for j in 0..n {
                for k in j..n {
                    h.add_at(j, k, row[j] * row[k] * w);
                }
            }
        }
        for j in 0..n {
            for k in (j + 1)..n {
                let v = h.at(j, k);
                h.set(k, j, v);
            }
        }
        Ok(h)
    }

    /// Local norm `||v||_x = sqrt(v^T H(x) v)`.
    pub fn local_norm(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let h = self.hessian(x)?;
        Ok(h.quadratic_form(v).max(0.0).sqrt())
    }

    /// Dual local norm `||v||_x^* = sqrt(v^T H(x)^{-1} v)`, via an SPD solve.
    pub fn dual_local_norm(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let h = self.hessian(x)?;
        let w = linalg::solve_spd(&h, v)?;
        Ok(linalg::dot(v, &w).max(0.0).sqrt())
    }

    /// Open-ball Dikin ellipsoid membership: `||y - x||_x < 1`.
    pub fn dikin_contains(&self, x: &[f64], y: &[f64]) -> Result<bool> {
        let diff = linalg::sub(y, x);
        Ok(self.local_norm(x, &diff)? < 1.0)
    }
}

/// Orthonormal eigenbasis of a symmetric positive definite matrix.
///
/// Eigenvalues are descending; each eigenvector's first component of
/// magnitude above 1e-12 is positive, so the decomposition is unique and
/// runs are reproducible.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
}

impl EigenBasis {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.eigenvectors[i]
    }

    /// Rebuilds `sum_i lambda_i e_i e_i^T`; used to validate decompositions.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dimension();
        let mut m = Matrix::zeros(n, n);
        for (lam, e) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for j in 0..n {
                for k in 0..n {
                    m.add_at(j, k, lam * e[j] * e[k]);
                }
            }
        }
        m
    }
}

/// Eigendecomposition for symmetric positive definite matrices (cyclic
/// Jacobi). Asymmetric input is an argument error; a non-positive
/// eigenvalue is a numeric error.
pub fn symmetric_eigendecomposition(h: &Matrix) -> Result<EigenBasis> {
    if h.rows() != h.cols() {
        return Err(Error::InvalidShape("eigendecomposition needs square input".into()));
    }
    let scale = h.frobenius_norm().max(1.0);
    let (i, j, dev) = h.max_asymmetry();
    if dev > 1e-12 * scale {
        return Err(Error::NotSymmetric { i, j, deviation: dev });
    }
    let (eigenvalues, eigenvectors) = linalg::sym_eigen(h)?;
    if eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(EigenBasis {
        eigenvalues,
        eigenvectors,
    })
}

/// Checks the self-concordance inequality
/// `|D^3 R(x)[h,h,h]| <= 2 (D^2 R(x)[h,h])^{3/2}`
/// with the third derivative estimated by a central finite difference of
/// the Hessian quadratic form along `h`, and relative slack 1e-3 for the
/// finite-difference error.
pub fn verify_self_concordance(
    barrier: &BarrierOracle,
    x: &[f64],
    h: &[f64],
    fd_step: f64,
) -> Result<bool> {
    barrier.domain().check_strictly_interior(x)?;
    if h.iter().all(|&c| c == 0.0) {
        return Ok(true);
    }
    let mut fwd = x.to_vec();
    linalg::add_scaled(&mut fwd, fd_step, h);
    let mut bwd = x.to_vec();
    linalg::add_scaled(&mut bwd, -fd_step, h);
    if !barrier.domain().is_strictly_interior(&fwd) || !barrier.domain().is_strictly_interior(&bwd)
    {
        return Err(Error::StencilOutsideDomain { step: fd_step });
    }
    let q_fwd = barrier.hessian(&fwd)?.quadratic_form(h);
    let q_bwd = barrier.hessian(&bwd)?.quadratic_form(h);
    let third = (q_fwd - q_bwd) / (2.0 * fd_step);
    let second = barrier.hessian(x)?.quadratic_form(h);
    Ok(third.abs() <= 2.0 * second.max(0.0).powf(1.5) * (1.0 + 1e-3))
}

/// Checks the theta-barrier inequality
/// `|DR(x)[h]| <= sqrt(theta * D^2 R(x)[h,h])`
/// from exact gradient and Hessian, with relative slack 1e-9.
pub fn verify_barrier_parameter(barrier: &BarrierOracle, x: &[f64], h: &[f64]) -> Result<bool> {
    let g = barrier.gradient(x)?;
    let second = barrier.hessian(x)?.quadratic_form(h);
    let lhs = linalg::dot(&g, h).abs();
    let rhs = (barrier.theta() * second.max(0.0)).sqrt();
    Ok(lhs <= rhs * (1.0 + 1e-9))
}

/// Random bounded test body: a box with per-axis bounds drawn from the rng
/// plus `extra_cuts` random halfspaces that keep the box center interior.
pub fn random_body(n: usize, extra_cuts: usize, rng: &mut RoundRng) -> ConvexPolytope {
    let lower: Vec<f64> = (0..n).map(|_| rng.uniform_in(-2.0, -0.4)).collect();
    let upper: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.4, 2.0)).collect();
    let center: Vec<f64> = lower.iter().zip(&upper).map(|(l, u)| 0.5 * (l + u)).collect();

    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for j in 0..n {
        let mut up = vec![0.0; n];
        up[j] = 1.0;
        rows.push(up);
        bounds.push(upper[j]);
        let mut lo = vec![0.0; n];
        lo[j] = -1.0;
        rows.push(lo);
        bounds.push(-lower[j]);
    }
    for _ in 0..extra_cuts {
        let dir = rng.unit_sphere(n);
        let margin = rng.uniform_in(0.3, 1.2);
        let offset = linalg::dot(&dir, &center) + margin;
        rows.push(dir);
        bounds.push(offset);
    }
    ConvexPolytope::with_interior_point(rows, bounds, center)
        .expect("random body is bounded with interior by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box1() -> BarrierOracle {
        make_log_barrier(ConvexPolytope::symmetric_box(1, 1.0).unwrap())
    }

    fn box2() -> BarrierOracle {
        make_log_barrier(ConvexPolytope::symmetric_box(2, 1.0).unwrap())
    }

    fn triangle() -> ConvexPolytope {
        ConvexPolytope::simplex(2).unwrap()
    }

    #[test]
    fn log_barrier_box_at_origin() {
        let b = box1();
        assert_eq!(b.theta(), 2.0);
        assert!(b.value(&[0.0]).unwrap().abs() < 1e-15);
        assert!(b.gradient(&[0.0]).unwrap()[0].abs() < 1e-15);
        assert!((b.hessian(&[0.0]).unwrap().at(0, 0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn log_barrier_blows_up_near_boundary() {
        let b = box1();
        // Closed form -log(1 - x) - log(1 + x) at x = 0.999.
        let expected = -(0.001f64.ln()) - (1.999f64.ln());
        let v = b.value(&[0.999]).unwrap();
        assert!(v > 6.2);
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn log_barrier_symmetric_gradient_vanishes() {
        let b = box2();
        let g = b.gradient(&[0.0, 0.0]).unwrap();
        assert!(g.iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn evaluation_outside_domain_is_rejected() {
        let b = box1();
        assert!(matches!(b.value(&[1.0]), Err(Error::NotInterior { .. })));
        assert!(matches!(b.gradient(&[1.5]), Err(Error::NotInterior { .. })));
    }

    #[test]
    fn local_norm_examples() {
        let b = box2();
        let x = [0.0, 0.0];
        assert!((b.local_norm(&x, &[1.0, 0.0]).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.local_norm(&x, &[0.0, 0.0]).unwrap(), 0.0);

        let b1 = box1();
        let dual = b1.dual_local_norm(&[0.0], &[1.0]).unwrap();
        assert!((dual - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dikin_membership_is_strict() {
        let b = box2();
        let x = [0.0, 0.0];
        // ||(0.5, 0.5)||_x^2 = 1 exactly: boundary excluded.
        assert!(!b.dikin_contains(&x, &[0.5, 0.5]).unwrap());
        assert!(b.dikin_contains(&x, &x).unwrap());
        assert!(b.dikin_contains(&x, &[0.5, 0.0]).unwrap());
    }

    #[test]
    fn self_concordance_examples() {
        let b = box2();
        assert!(verify_self_concordance(&b, &[0.0, 0.0], &[1.0, 0.0], 1e-4).unwrap());
        assert!(verify_self_concordance(&b, &[0.3, -0.2], &[0.0, 0.0], 1e-4).unwrap());

        let b1 = box1();
        // At x = 0.5: |D^3| = 2/0.125 - 2/3.375 = 15.407... <= 2 (40/9)^{3/2} = 18.737...
        assert!(verify_self_concordance(&b1, &[0.5], &[1.0], 1e-4).unwrap());
        let third: f64 = 2.0 / 0.125 - 2.0 / 3.375;
        let second: f64 = 4.0 + 4.0 / 9.0;
        assert!(third.abs() <= 2.0 * second.powf(1.5));
    }

    #[test]
    fn self_concordance_stencil_guard() {
        let b = box1();
        assert!(matches!(
            verify_self_concordance(&b, &[0.9], &[1.0], 0.2),
            Err(Error::StencilOutsideDomain { .. })
        ));
    }

    #[test]
    fn barrier_parameter_examples() {
        let b1 = box1();
        assert!(verify_barrier_parameter(&b1, &[0.0], &[1.0]).unwrap());
        assert!(verify_barrier_parameter(&b1, &[0.9], &[1.0]).unwrap());

        let tri = make_log_barrier(triangle());
        assert_eq!(tri.theta(), 3.0);
        let third = 1.0 / 3.0;
        assert!(verify_barrier_parameter(&tri, &[third, third], &[1.0, -1.0]).unwrap());
        // Gradient cancels at the centroid, so the left side is zero.
        let g = tri.gradient(&[third, third]).unwrap();
        assert!(linalg::dot(&g, &[1.0, -1.0]).abs() < 1e-12);
    }

    #[test]
    fn eigendecomposition_examples() {
        let h = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let basis = symmetric_eigendecomposition(&h).unwrap();
        assert_eq!(basis.eigenvalues(), &[2.0, 2.0]);
        assert_eq!(basis.eigenvector(0), &[1.0, 0.0]);
        assert_eq!(basis.eigenvector(1), &[0.0, 1.0]);

        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.1, 1.0]]).unwrap();
        assert!(matches!(
            symmetric_eigendecomposition(&asym),
            Err(Error::NotSymmetric { .. })
        ));

        let indef = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -2.0]]).unwrap();
        assert!(matches!(
            symmetric_eigendecomposition(&indef),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn dikin_flattening_on_the_interval() {
        // Offset magnitude lambda^{-1/2} shrinks at least as fast as the
        // distance to the boundary.
        let b = box1();
        for &x in &[0.0, 0.5, 0.9, 0.99] {
            let lam = b.hessian(&[x]).unwrap().at(0, 0);
            assert!(lam.powf(-0.5) <= (1.0 - x.abs()) + 1e-12, "x = {x}");
        }
    }

    #[test]
    fn polytope_construction_guards() {
        // Half-space x <= 1 alone is unbounded.
        assert!(matches!(
            ConvexPolytope::new(vec![vec![1.0]], vec![1.0]),
            Err(Error::Unbounded)
        ));
        // x <= 0 and -x <= -1 has empty interior.
        assert!(matches!(
            ConvexPolytope::new(vec![vec![1.0], vec![-1.0]], vec![0.0, -1.0]),
            Err(Error::EmptyInterior)
        ));
    }

    #[test]
    fn interior_search_finds_offcenter_bodies() {
        // Shifted box [10, 11] x [-3, -1]: origin is far outside.
        let body = ConvexPolytope::new(
            vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
            ],
            vec![11.0, -10.0, -1.0, 3.0],
        )
        .unwrap();
        let w = body.interior_point().to_vec();
        assert!(body.is_strictly_interior(&w));
        assert!(w[0] > 10.0 && w[0] < 11.0 && w[1] > -3.0 && w[1] < -1.0);
    }

    #[test]
    fn vertex_enumeration_box_and_triangle() {
        let body = ConvexPolytope::symmetric_box(2, 1.0).unwrap();
        let verts = body.vertices().unwrap();
        assert_eq!(verts.len(), 4);
        assert_eq!(verts[0], vec![-1.0, -1.0]);
        assert_eq!(verts[3], vec![1.0, 1.0]);

        let tri = triangle().vertices().unwrap();
        assert_eq!(tri.len(), 3);
        assert_eq!(tri[0], vec![0.0, 0.0]);
        assert_eq!(tri[1], vec![0.0, 1.0]);
        assert_eq!(tri[2], vec![1.0, 0.0]);
    }

    #[test]
    fn interior_samples_stay_interior() {
        let mut rng = RoundRng::labeled(42, 0);
        let body = random_body(3, 2, &mut rng);
        for _ in 0..50 {
            let x = body.sample_interior(&mut rng, 8);
            assert!(body.is_strictly_interior(&x));
        }
    }
}
