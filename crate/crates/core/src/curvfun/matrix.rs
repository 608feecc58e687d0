//! Derivatives of `F(A) = f(λ(A))` with respect to the symmetric matrix `A`.

use super::{divided_difference, CurvatureFunction, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat, SymEigen};
use crate::scalar::Scalar;

/// First derivative `Ḟ^{ij}` and the second-order quadratic form `F̈(B, B)` at a point `A`.
#[derive(Clone, Debug)]
pub struct MatrixDerivatives<T> {
    /// `Ḟ = Σ ḟ_i u_i u_iᵀ`.
    pub first: Mat<T>,
    pub eigen: SymEigen<T>,
    /// `ḟ` at the sorted eigenvalues.
    pub grad: Vec<T>,
    /// `f̈` at the sorted eigenvalues.
    pub hess: Mat<T>,
    pub value: T,
    coincident: T,
}

impl<T: Scalar> MatrixDerivatives<T> {
    /// `F̈(B, B) = Σ f̈_kl B̃_kk B̃_ll + 2 Σ_{k<l} (ḟ_k - ḟ_l)/(λ_k - λ_l) B̃_kl²`
    /// with `B̃` the direction expressed in the eigenbasis of `A`.
    pub fn second_form(&self, b: &Mat<T>) -> Result<T> {
        let n = self.first.dim();
        if b.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: b.dim(),
            });
        }
        if !b.is_finite() {
            return Err(Error::NonFinite("direction matrix".into()));
        }
        let bt = self.eigen.rotate_into(b);
        let lambda = &self.eigen.values;
        let mut acc = T::zero();
        for k in 0..n {
            for l in 0..n {
                acc += self.hess.get(k, l) * bt.get(k, k) * bt.get(l, l);
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                let dd = divided_difference(lambda, &self.grad, &self.hess, k, l, self.coincident);
                let bkl = bt.get(k, l);
                acc += T::lit(2.0) * dd * bkl * bkl;
            }
        }
        Ok(acc)
    }

    /// `⟨Ḟ, B⟩ = d/ds F(A + sB)|₀`.
    pub fn first_pairing(&self, b: &Mat<T>) -> T {
        self.first.inner(b)
    }
}

/// Computes the eigen-decomposition of `a` once and the derivative data on top of it.
pub fn matrix_derivatives<T: Scalar>(
    f: &CurvatureFunction<T>,
    a: &Mat<T>,
    tol: &Tolerances<T>,
) -> Result<MatrixDerivatives<T>> {
    if a.dim() != f.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            got: a.dim(),
        });
    }
    let eigen = sym_eigen(a)?;
    let value = f.eval_slice(&eigen.values)?;
    let grad = f.grad_slice(&eigen.values)?;
    let hess = f.hess_slice(&eigen.values)?;
    let first = eigen.assemble(&grad);
    Ok(MatrixDerivatives {
        first,
        eigen,
        grad,
        hess,
        value,
        coincident: tol.coincident,
    })
}

/// `F(A) = f(λ(A))`.
pub fn eval_matrix<T: Scalar>(f: &CurvatureFunction<T>, a: &Mat<T>) -> Result<T> {
    if a.dim() != f.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            got: a.dim(),
        });
    }
    let eigen = sym_eigen(a)?;
    f.eval_slice(&eigen.values)
}

pub fn matrix_first_derivative<T: Scalar>(f: &CurvatureFunction<T>, a: &Mat<T>) -> Result<Mat<T>> {
    Ok(matrix_derivatives(f, a, &Tolerances::default())?.first)
}

/// `F̈(B, B)` at `A`. A non-diagonal `A` is diagonalized first.
pub fn matrix_second_form<T: Scalar>(
    f: &CurvatureFunction<T>,
    a: &Mat<T>,
    b: &Mat<T>,
) -> Result<T> {
    matrix_derivatives(f, a, &Tolerances::default())?.second_form(b)
}
