//! Dense linear algebra for the handful of small problems this crate solves:
//! spin Hamiltonians of dimension ≤ a few dozen and least-squares design
//! matrices with a few columns.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::{fabs, sqrt};

use crate::error::{invalid, Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices. Panics if the rows are ragged.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product. Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(fabs(*x)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise |A - Aᵀ|. Returns `INFINITY` for non-square input.
    pub fn max_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max(fabs(self[(i, j)] - self[(j, i)]));
            }
        }
        worst
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)] * self[(i, j)];
                }
            }
        }
        sqrt(acc)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Unordered output of [`jacobi_eigen`]: `values[k]` belongs to column `k` of
/// `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Converged when the off-diagonal Frobenius norm is at most
/// `rel_tol · ‖A‖_F`. Input symmetry is the caller's responsibility; only the
/// shape is checked here.
pub fn jacobi_eigen(a: &Matrix, rel_tol: f64, max_sweeps: usize) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let threshold = rel_tol * a.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = m.off_diagonal_norm();
        if off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let values = (0..n).map(|i| m[(i, i)]).collect();
    Ok(SymmetricEigen {
        values,
        vectors: v,
        sweeps,
    })
}

// A <- Jᵀ A J, V <- V J with J = [[c, s], [-s, c]] in the (p, q) plane.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let (akp, akq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * akp - s * akq;
        m[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * apk - s * aqk;
        m[(q, k)] = s * apk + c * aqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Householder QR least-squares solution of `a · x ≈ b` for a tall,
/// full-column-rank `a`.
#[derive(Debug, Clone)]
pub struct QrLeastSquares {
    pub solution: Vec<f64>,
    /// Upper-triangular factor (p × p).
    pub r: Matrix,
}

pub fn qr_least_squares(a: &Matrix, b: &[f64]) -> Result<QrLeastSquares> {
    let (n, p) = (a.rows(), a.cols());
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    if n < p {
        return Err(Error::InsufficientData {
            rows: n,
            required: p,
        });
    }
    let mut work = a.clone();
    let mut rhs = b.to_vec();
    let mut v = vec![0.0; n];

    for k in 0..p {
        let norm = sqrt((k..n).map(|i| work[(i, k)] * work[(i, k)]).sum());
        if norm == 0.0 {
            return Err(Error::DegenerateBasis {
                condition_number: f64::INFINITY,
            });
        }
        let alpha = if work[(k, k)] > 0.0 { -norm } else { norm };
        for i in k..n {
            v[i] = work[(i, k)];
        }
        v[k] -= alpha;
        let vnorm2: f64 = (k..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..p {
            let dot: f64 = (k..n).map(|i| v[i] * work[(i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                work[(i, j)] -= f * v[i];
            }
        }
        let dot: f64 = (k..n).map(|i| v[i] * rhs[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..n {
            rhs[i] -= f * v[i];
        }
    }

    let r = Matrix::from_fn(p, p, |i, j| if j >= i { work[(i, j)] } else { 0.0 });
    let solution = solve_upper(&r, &rhs[..p])?;
    Ok(QrLeastSquares { solution, r })
}

fn solve_upper(r: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let p = r.rows();
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let diag = r[(i, i)];
        if diag == 0.0 {
            return Err(Error::DegenerateBasis {
                condition_number: f64::INFINITY,
            });
        }
        let tail: f64 = (i + 1..p).map(|j| r[(i, j)] * x[j]).sum();
        x[i] = (b[i] - tail) / diag;
    }
    Ok(x)
}

/// Inverse of an upper-triangular matrix.
pub fn upper_triangular_inverse(r: &Matrix) -> Result<Matrix> {
    if !r.is_square() {
        return Err(invalid("triangular inverse needs a square matrix"));
    }
    let p = r.rows();
    let mut inv = Matrix::zeros(p, p);
    for j in 0..p {
        let mut e = vec![0.0; p];
        e[j] = 1.0;
        let col = solve_upper(r, &e)?;
        for i in 0..p {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Singular values (descending) by one-sided Jacobi orthogonalization of the
/// columns. Accurate in the relative sense, which is what a condition number
/// check needs.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let (n, p) = (a.rows(), a.cols());
    let mut w = a.clone();
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..n {
                    alpha += w[(k, i)] * w[(k, i)];
                    beta += w[(k, j)] * w[(k, j)];
                    gamma += w[(k, i)] * w[(k, j)];
                }
                if fabs(gamma) <= 1e-15 * sqrt(alpha * beta) || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                for k in 0..n {
                    let (x, y) = (w[(k, i)], w[(k, j)]);
                    w[(k, i)] = c * x - s * y;
                    w[(k, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..p)
        .map(|j| sqrt((0..n).map(|k| w[(k, j)] * w[(k, j)]).sum()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// 2-norm condition number; infinite when a singular value is zero.
pub fn condition_number(a: &Matrix) -> f64 {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&max), Some(&min)) if min > 0.0 => max / min,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}
