//! Dense square matrices of size at most 3 and a symmetric eigensolver.
//!
//! Sizes 1 and 2 are diagonalized in closed form, size 3 by cyclic Jacobi
//! rotations. Eigenvalues come back in non-decreasing order; equal values keep
//! their original index order.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 3;

/// Square `n x n` matrix with `n <= 3`, stored inline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<T> {
    n: usize,
    a: [[T; MAX_DIM]; MAX_DIM],
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "matrix dimension {n} unsupported");
        Self {
            n,
            a: [[T::zero(); MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i][i] = T::one();
        }
        m
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.a[i][i] = v;
        }
        m
    }

    /// Builds a matrix from row slices; every row must have length `rows.len()`.
    pub fn from_rows(rows: &[&[T]]) -> Result<Self> {
        let n = rows.len();
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::Invalid(format!("matrix dimension {n} unsupported")));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.a[i][j] = v;
            }
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i][j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < self.n && j < self.n);
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.n && j < self.n);
        self.a[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.a[j][i])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(T::zero(), |acc, k| acc + self.a[i][k] * rhs.a[k][j])
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |i, j| self.a[i][j] + rhs.a[i][j])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |i, j| self.a[i][j] - rhs.a[i][j])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.n, |i, j| self.a[i][j] * s)
    }

    /// Frobenius pairing `sum_ij A_ij B_ij`.
    pub fn inner(&self, rhs: &Self) -> T {
        assert_eq!(self.n, rhs.n);
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.a[i][j] * rhs.a[i][j];
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.a[i][i])
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.a[i][i]).collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner(self).sqrt()
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max(self.a[i][j].abs());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.a[i][j].is_finite()))
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.a[i][j] - self.a[j][i]).abs() <= tol))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.a[i][j] == T::zero()))
    }

    /// `Q A Q^T`.
    pub fn congruence(&self, q: &Self) -> Self {
        q.mul(self).mul(&q.transpose())
    }

    pub fn determinant(&self) -> T {
        let a = &self.a;
        match self.n {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    /// Inverse by cofactors; errors on a zero determinant.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if det == T::zero() || !det.is_finite() {
            return Err(Error::Degenerate("singular matrix".into()));
        }
        let a = &self.a;
        let inv = match self.n {
            1 => Self::from_diag(&[T::one() / det]),
            2 => Self::from_fn(2, |i, j| {
                let cof = match (i, j) {
                    (0, 0) => a[1][1],
                    (1, 1) => a[0][0],
                    (0, 1) => -a[0][1],
                    _ => -a[1][0],
                };
                cof / det
            }),
            _ => Self::from_fn(3, |i, j| {
                // adjugate entry (i, j) is the cofactor of (j, i)
                let (r0, r1) = others(j);
                let (c0, c1) = others(i);
                let minor = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
                let sign = if (i + j) % 2 == 0 { T::one() } else { -T::one() };
                sign * minor / det
            }),
        };
        Ok(inv)
    }
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Eigen-decomposition `A = U diag(values) U^T` of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: Mat<T>,
}

impl<T: Scalar> SymEigen<T> {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.vectors.dim()).map(|i| self.vectors.get(i, k)).collect()
    }

    /// Expresses `b` in the eigenbasis: `U^T B U`.
    pub fn rotate_into(&self, b: &Mat<T>) -> Mat<T> {
        self.vectors.transpose().mul(b).mul(&self.vectors)
    }

    /// Assembles `U diag(d) U^T`.
    pub fn assemble(&self, d: &[T]) -> Mat<T> {
        Mat::from_diag(d).congruence(&self.vectors)
    }
}

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Symmetric eigen-decomposition. Only the lower triangle is trusted to match
/// the upper one; asymmetric input beyond rounding is rejected.
pub fn sym_eigen<T: Scalar>(a: &Mat<T>) -> Result<SymEigen<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix entries".into()));
    }
    let scale = a.max_abs().max(T::one());
    if !a.is_symmetric(T::lit(1e-9) * scale) {
        return Err(Error::Invalid("matrix is not symmetric".into()));
    }
    let (values, vectors) = match a.dim() {
        1 => (vec![a.get(0, 0)], Mat::identity(1)),
        2 => eigen2(a),
        _ => jacobi3(a)?,
    };
    Ok(sort_eigen(values, vectors))
}

fn eigen2<T: Scalar>(a: &Mat<T>) -> (Vec<T>, Mat<T>) {
    let (p, b, d) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
    if b == T::zero() {
        return (vec![p, d], Mat::identity(2));
    }
    let two = T::lit(2.0);
    let mean = (p + d) / two;
    let half = (p - d) / two;
    let r = half.hypot(b);
    let theta = (two * b).atan2(p - d) / two;
    let (s, c) = theta.sin_cos();
    // column 0 spans the larger eigenvalue, column 1 the smaller one
    let vectors = Mat::from_fn(2, |i, j| match (i, j) {
        (0, 0) => c,
        (1, 0) => s,
        (0, 1) => -s,
        _ => c,
    });
    (vec![mean + r, mean - r], vectors)
}

fn jacobi3<T: Scalar>(a: &Mat<T>) -> Result<(Vec<T>, Mat<T>)> {
    let n = a.dim();
    let mut m = *a;
    // symmetrize exactly
    for i in 0..n {
        for j in 0..i {
            let v = (m.get(i, j) + m.get(j, i)) / T::lit(2.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    let mut v = Mat::identity(n);
    let tol = T::lit(JACOBI_TOL).max(T::epsilon() * T::lit(4.0));
    let norm = m.frobenius_norm();
    if norm == T::zero() {
        return Ok((vec![T::zero(); n], v));
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .fold(T::zero(), |acc, (p, q)| acc + m.get(p, q) * m.get(p, q))
            .sqrt();
        if off <= tol * norm {
            return Ok((m.diagonal(), v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == T::zero() {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let mut j = Mat::identity(n);
                j.set(p, p, c);
                j.set(q, q, c);
                j.set(p, q, s);
                j.set(q, p, -s);
                m = j.transpose().mul(&m).mul(&j);
                m.set(p, q, T::zero());
                m.set(q, p, T::zero());
                v = v.mul(&j);
            }
        }
    }
    Err(Error::Degenerate(
        "Jacobi eigensolver did not converge".into(),
    ))
}

fn sort_eigen<T: Scalar>(values: Vec<T>, vectors: Mat<T>) -> SymEigen<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep index order
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));
    let sorted = order.iter().map(|&k| values[k]).collect();
    let vecs = Mat::from_fn(n, |i, j| vectors.get(i, order[j]));
    SymEigen {
        values: sorted,
        vectors: vecs,
    }
}
