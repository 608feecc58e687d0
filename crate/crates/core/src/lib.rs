//! Numerical laboratory for Weingarten curvature functions, generalized support
//! functions in space forms, self-similar solutions `F + τZ = 0` and convex
//! curvature flows `∂X/∂t = F ν`.
//!
//! The algebraic kits ([`curvfun`], [`spaceform`], [`soliton::pinching`], [`linalg`]) are
//! generic over [`Scalar`] (`f32` or `f64`); the discrete geometry, soliton
//! fitting and flow integrator work in `f64`. Concrete aliases for both
//! precisions are exported below.

// `!(x > 0.0)` style tests also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvfun;
pub mod error;
pub mod flow;
pub mod hypersurface;
pub mod linalg;
pub mod scalar;
pub mod soliton;
pub mod spaceform;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type CurvatureFn = curvfun::CurvatureFunction<f64>;
pub type CurvatureFn32 = curvfun::CurvatureFunction<f32>;
pub type Eigenvalues = curvfun::EigenvalueVector<f64>;
pub type Eigenvalues32 = curvfun::EigenvalueVector<f32>;
pub type Matrix = linalg::Mat<f64>;
pub type Matrix32 = linalg::Mat<f32>;
pub type SpaceForm = spaceform::SpaceFormParams<f64>;
pub type SpaceForm32 = spaceform::SpaceFormParams<f32>;
