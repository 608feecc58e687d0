//! Symmetric curvature functions of the principal curvatures.
//!
//! A [`CurvatureFunction`] is a symmetric, positively homogeneous `f(λ)` with
//! exact value, gradient and Hessian. The induced matrix function
//! `F(A) = f(λ(A))` and its first and second derivatives live in [`matrix`];
//! the homogeneity and convexity identities in [`identities`].

mod family;
pub mod identities;
pub mod matrix;
mod parse;

pub use family::{CurvatureFunction, Family};
pub use identities::{
    convexity_classify, euler_residuals, lemma23_gaps, Convexity, ConvexityReport, EulerResiduals,
    PairingGaps,
};
pub use matrix::{
    eval_matrix, matrix_derivatives, matrix_first_derivative, matrix_second_form,
    MatrixDerivatives,
};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Principal curvatures `(λ_1, ..., λ_n)` with `n` in `1..=3`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueVector<T>(Vec<T>);

impl<T: Scalar> EigenvalueVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if !(1..=3).contains(&values.len()) {
            return Err(Error::Invalid(format!(
                "eigenvalue vector length {} outside 1..=3",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("λ_{} = {}", i + 1, values[i])));
        }
        Ok(Self(values))
    }

    pub fn from_slice(values: &[T]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Membership in Γ₊: every entry strictly positive.
    pub fn in_positive_cone(&self) -> bool {
        self.0.iter().all(|&v| v > T::zero())
    }

    pub fn scaled(&self, t: T) -> Self {
        Self(self.0.iter().map(|&v| v * t).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&i| self.0[i]).collect())
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

/// Numerical thresholds used by the curvature-function operations.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances<T> {
    /// Relative gap below which two eigenvalues are treated as coincident
    /// (divided differences then switch to their limit `f̈_kk - f̈_kl`).
    pub coincident: T,
    /// Slack allowed in the sampled convexity criteria, relative to the local scale.
    pub convexity: T,
    /// Minimum sample count for a definite convexity verdict.
    pub min_convexity_samples: usize,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            coincident: T::lit(1e-8),
            convexity: T::lit(1e-10),
            min_convexity_samples: 10,
        }
    }
}

/// Divided difference `(ḟ_k - ḟ_l)/(λ_k - λ_l)`, replaced by its symmetric limit
/// `f̈_kk - f̈_kl` when the eigenvalues are within the coincidence tolerance.
pub(crate) fn divided_difference<T: Scalar>(
    lambda: &[T],
    grad: &[T],
    hess: &crate::linalg::Mat<T>,
    k: usize,
    l: usize,
    coincident: T,
) -> T {
    let norm = lambda.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt();
    let gap = lambda[k] - lambda[l];
    if gap.abs() < coincident * norm.max(T::one()) {
        hess.get(k, k) - hess.get(k, l)
    } else {
        (grad[k] - grad[l]) / gap
    }
}
