#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use solitonlab::{CurvatureFn, Eigenvalues, Matrix};

pub fn builtins(n: usize) -> Vec<&'static str> {
    let mut v = vec!["H", "K", "norm", "geomean", "pow(H,-1)", "pow(K,0.5)", "pow(norm,3)"];
    if n >= 2 {
        v.push("sigma2");
        v.push("pow(sigma2,-2)");
    }
    if n == 3 {
        v.push("sigma3");
    }
    v
}

pub fn cf(spec: &str, n: usize) -> CurvatureFn {
    CurvatureFn::parse(spec, n).unwrap()
}

pub fn positive_lambda(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.2..3.0)).collect()
}

pub fn eig(l: &[f64]) -> Eigenvalues {
    Eigenvalues::from_slice(l).unwrap()
}

pub fn to_na(a: &Matrix) -> DMatrix<f64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.get(i, j))
}

pub fn from_na(a: &DMatrix<f64>) -> Matrix {
    Matrix::from_fn(a.nrows(), |i, j| a[(i, j)])
}

/// Random rotation from the QR factorization of a Gaussian-like matrix.
pub fn rotation(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    from_na(&g.qr().q())
}

/// `Q diag(λ) Qᵀ` with a random rotation `Q`.
pub fn random_symmetric(rng: &mut ChaCha8Rng, lambda: &[f64]) -> Matrix {
    let q = rotation(rng, lambda.len());
    Matrix::from_diag(lambda).congruence(&q)
}

pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    from_na(&((&b + b.transpose()) * 0.5))
}

/// Eigenvalues by nalgebra, ascending.
pub fn oracle_eigenvalues(a: &Matrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_na(a)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `F(A)` through the independent eigenvalue oracle.
pub fn oracle_value(f: &CurvatureFn, a: &Matrix) -> f64 {
    f.eval_slice(&oracle_eigenvalues(a)).unwrap()
}

/// Second central difference of `s ↦ F(A + sB)` at `s = 0`.
pub fn fd_second(f: &CurvatureFn, a: &Matrix, b: &Matrix, h: f64) -> f64 {
    let at = |s: f64| oracle_value(f, &a.add(&b.scale(s)));
    (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h)) / (12.0 * h * h)
}

/// First central difference of `s ↦ F(A + sB)` at `s = 0`.
pub fn fd_first(f: &CurvatureFn, a: &Matrix, b: &Matrix, h: f64) -> f64 {
    let at = |s: f64| oracle_value(f, &a.add(&b.scale(s)));
    (at(h) - at(-h)) / (2.0 * h)
}
