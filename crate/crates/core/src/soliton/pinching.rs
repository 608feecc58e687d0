//! Sufficient conditions for a soliton to be an umbilical sphere, in terms of
//! the degree `m`, the convexity class of `f` and the pinching ratio
//! `r = λ_max/λ_min`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curvfun::{Convexity, CurvatureFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One of the three alternative hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    /// `m ≥ 1` and `f` convex or concave.
    #[serde(rename = "2(i)")]
    PositiveDegree,
    /// `m < 0` and `f` convex or concave.
    #[serde(rename = "2(ii)")]
    NegativeDegree,
    /// `n = 2` with the degree-dependent pinching bound.
    #[serde(rename = "2(iii)")]
    Surface,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::PositiveDegree => "2(i)",
            Condition::NegativeDegree => "2(ii)",
            Condition::Surface => "2(iii)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchingVerdict<T> {
    pub n: usize,
    pub m: T,
    pub f_classification: Convexity,
    pub r_max_observed: T,
    pub covered_by: Vec<Condition>,
    pub threshold_2iii: Option<T>,
    pub admissible: bool,
}

/// `(2r² + (m−1)r − (m−1), (m−1)r² − (m−1)r − 2)`.
pub fn pinching_quadratics<T: Scalar>(m: T, r: T) -> (T, T) {
    let a = m - T::one();
    let two = T::lit(2.0);
    (two * r * r + a * r - a, a * r * r - a * r - two)
}

/// Closed-form pinching bound for surfaces: `½(1+√(1+8/(m−1)))` for `m > 1`,
/// `2/(1+√(1−8/(1−m)))` for `m < −7`, none otherwise.
pub fn threshold_2iii<T: Scalar>(m: T) -> Option<T> {
    let (one, eight) = (T::one(), T::lit(8.0));
    if m > one {
        Some(T::lit(0.5) * (one + (one + eight / (m - one)).sqrt()))
    } else if m < T::lit(-7.0) {
        // 1 - 8/(1-m) written as (-7-m)/(1-m) to avoid cancellation near m = -7.
        Some(T::lit(2.0) / (one + ((T::lit(-7.0) - m) / (one - m)).sqrt()))
    } else {
        None
    }
}

/// Root of the binding quadratic found by bisection, independent of
/// [`threshold_2iii`]: the root `r ≥ 1` of the second quadratic for `m > 1`, the
/// smaller root of the first for `m < −7`.
pub fn binding_root<T: Scalar>(m: T) -> Option<T> {
    let one = T::one();
    let (q, mut lo, mut hi): (Box<dyn Fn(T) -> T>, T, T) = if m > one {
        let mut hi = T::lit(2.0);
        while pinching_quadratics(m, hi).1 < T::zero() {
            hi *= T::lit(2.0);
        }
        (Box::new(move |r| pinching_quadratics(m, r).1), one, hi)
    } else if m < T::lit(-7.0) {
        // The first quadratic is positive at r = 1 and negative at its vertex.
        let vertex = (one - m) / T::lit(4.0);
        // The first quadratic regrouped as 2(r-2)² + (m+7)(r-1), which keeps
        // its accuracy near the double root at m = -7.
        let shift = m + T::lit(7.0);
        let two = T::lit(2.0);
        (Box::new(move |r| two * (r - two) * (r - two) + shift * (r - one)), one, vertex)
    } else {
        return None;
    };
    let lo_sign = q(lo).signum();
    for _ in 0..400 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if q(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) * T::lit(0.5))
}

/// Evaluates the three alternative hypotheses for `(n, m, class, r_max)`.
pub fn admissibility<T: Scalar>(
    n: usize,
    m: T,
    classification: Convexity,
    r_max: T,
) -> Result<PinchingVerdict<T>> {
    if m == T::zero() || !m.is_finite() {
        return Err(Error::Invalid(format!("degree m = {m} must be finite and nonzero")));
    }
    if !(r_max >= T::one()) || !r_max.is_finite() {
        return Err(Error::Invalid(format!("pinching ratio {r_max} must be finite and >= 1")));
    }
    let cc = classification.is_convex_or_concave();
    let mut covered_by = Vec::new();
    if m >= T::one() && cc {
        covered_by.push(Condition::PositiveDegree);
    }
    if m < T::zero() && cc {
        covered_by.push(Condition::NegativeDegree);
    }
    let threshold = if n == 2 { threshold_2iii(m) } else { None };
    if n == 2 {
        let unconditional = m == T::one() || (m >= T::lit(-7.0) && m < T::zero());
        if unconditional || threshold.is_some_and(|t| r_max <= t) {
            covered_by.push(Condition::Surface);
        }
    }
    Ok(PinchingVerdict {
        n,
        m,
        f_classification: classification,
        r_max_observed: r_max,
        admissible: !covered_by.is_empty(),
        covered_by,
        threshold_2iii: threshold,
    })
}

/// [`admissibility`] with `n` and `m` taken from `f`.
pub fn admissibility_for<T: Scalar>(
    f: &CurvatureFunction<T>,
    classification: Convexity,
    r_max: T,
) -> Result<PinchingVerdict<T>> {
    admissibility(f.dim(), f.degree(), classification, r_max)
}
