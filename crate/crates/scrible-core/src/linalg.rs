//! Small dense linear algebra: row-major matrices, SPD solves via Cholesky,
//! pivoted LU for square systems, and a cyclic Jacobi eigensolver.
//!
//! Bodies in this crate are desk scale (n <= 64), so everything here is a
//! plain dense O(n^3) routine with deterministic output.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds a matrix from row slices. All rows must share a length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidShape("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mat_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// x^T A x for square A.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mat_vec(x))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute asymmetry |a_ij - a_ji| together with its indices.
    pub fn max_asymmetry(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = (self.at(i, j) - self.at(j, i)).abs();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_scaled(x: &mut [f64], alpha: f64, d: &[f64]) {
    for (xi, di) in x.iter_mut().zip(d) {
        *xi += alpha * di;
    }
}

pub fn scaled(v: &[f64], alpha: f64) -> Vec<f64> {
    v.iter().map(|x| alpha * x).collect()
}

/// Cholesky factorization of a symmetric positive definite matrix.
///
/// Returns the lower-triangular factor L with A = L L^T, or
/// [`Error::NotPositiveDefinite`] when a pivot is non-positive.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::InvalidShape("cholesky needs a square matrix".into()));
    }
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.at(i, j);
            for k in 0..j {
                sum -= l.at(i, k) * l.at(j, k);
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l.set(i, j, sum.sqrt());
            } else {
                l.set(i, j, sum / l.at(j, j));
            }
        }
    }
    Ok(l)
}

/// Solves A x = b for SPD A via Cholesky; never forms A^{-1}.
pub fn solve_spd(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(a)?;
    Ok(cholesky_solve(&l, b))
}

/// Solves L L^T x = b given the lower factor L.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l.at(i, k) * y[k];
        }
        y[i] = sum / l.at(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in (i + 1)..n {
            sum -= l.at(k, i) * x[k];
        }
        x[i] = sum / l.at(i, i);
    }
    x
}

/// Solves a general square system by partial-pivot LU.
///
/// Returns `None` when the matrix is numerically singular; callers doing
/// vertex enumeration skip such constraint subsets.
pub fn solve_square(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return None;
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut pivot = col;
        let mut best = m.at(col, col).abs();
        for r in (col + 1)..n {
            let v = m.at(r, col).abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best < 1e-12 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m.at(col, j);
                m.set(col, j, m.at(pivot, j));
                m.set(pivot, j, tmp);
            }
            x.swap(col, pivot);
        }
        for r in (col + 1)..n {
            let factor = m.at(r, col) / m.at(col, col);
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m.at(r, j) - factor * m.at(col, j);
                m.set(r, j, v);
            }
            x[r] -= factor * x[col];
        }
    }
    for i in (0..n).rev() {
        let mut sum = x[i];
        for j in (i + 1)..n {
            sum -= m.at(i, j) * x[j];
        }
        x[i] = sum / m.at(i, i);
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Off-diagonal Frobenius norm, the Jacobi convergence measure.
fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.at(i, j) * a.at(i, j);
            }
        }
    }
    s.sqrt()
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-12;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps run in fixed (p, q) row order until the off-diagonal Frobenius
/// norm drops below `1e-12` relative to the matrix scale, so the output is
/// deterministic for identical input. Eigenvalues come back in descending
/// order; each eigenvector is sign-fixed so its first component of
/// magnitude above 1e-12 is positive.
pub fn sym_eigen(a: &Matrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::InvalidShape("eigensolver needs a square matrix".into()));
    }
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.at(p, q);
                if apq.abs() <= JACOBI_OFF_TOL * scale / (n as f64) {
                    continue;
                }
                let app = m.at(p, p);
                let aqq = m.at(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m.at(k, p);
                    let mkq = m.at(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.at(p, k);
                    let mqk = m.at(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Descending eigenvalues; original column index breaks exact ties.
    order.sort_by(|&i, &j| {
        m.at(j, j)
            .partial_cmp(&m.at(i, i))
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &col in &order {
        values.push(m.at(col, col));
        let mut e: Vec<f64> = (0..n).map(|k| v.at(k, col)).collect();
        if let Some(&lead) = e.iter().find(|c| c.abs() > 1e-12) {
            if lead < 0.0 {
                for c in &mut e {
                    *c = -*c;
                }
            }
        }
        vectors.push(e);
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd_system() {
        let a = Matrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = solve_spd(&a, &[1.0, 2.0]).unwrap();
        // Solve by hand: [4 1; 1 3] x = [1; 2] => x = [1/11, 7/11].
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-12);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&a), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn lu_solves_and_flags_singular() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let x = solve_square(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 5.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);

        let s = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(solve_square(&s, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn jacobi_diagonal_input() {
        let a = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let (vals, vecs) = sym_eigen(&a).unwrap();
        assert_eq!(vals, vec![2.0, 2.0]);
        assert_eq!(vecs[0], vec![1.0, 0.0]);
        assert_eq!(vecs[1], vec![0.0, 1.0]);
    }

    #[test]
    fn jacobi_two_by_two_closed_form() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (vals, vecs) = sym_eigen(&a).unwrap();
        let r = 0.5_f64.sqrt();
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((vecs[0][0] - r).abs() < 1e-12 && (vecs[0][1] - r).abs() < 1e-12);
        assert!((vecs[1][0] - r).abs() < 1e-12 && (vecs[1][1] + r).abs() < 1e-12);
    }

    #[test]
    fn jacobi_identity() {
        let a = Matrix::identity(5);
        let (vals, _) = sym_eigen(&a).unwrap();
        assert!(vals.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }
}
