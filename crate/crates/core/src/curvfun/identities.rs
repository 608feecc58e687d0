//! Homogeneity (Euler) relations, sampled convexity and the pairing inequalities
//! between a convex and a concave function of equal degree.

use serde::{Deserialize, Serialize};

use super::{divided_difference, matrix_derivatives, CurvatureFunction, EigenvalueVector, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat};
use crate::scalar::Scalar;

/// `(|Ḟ^{ij}A_ij - mF|, |F̈(A,A) - (m-1)Ḟ^{rs}A_rs|)` together with `F`.
#[derive(Clone, Copy, Debug)]
pub struct EulerResiduals<T> {
    pub first: T,
    pub second: T,
    pub value: T,
}

pub fn euler_residuals<T: Scalar>(
    f: &CurvatureFunction<T>,
    a: &Mat<T>,
    tol: &Tolerances<T>,
) -> Result<EulerResiduals<T>> {
    let d = matrix_derivatives(f, a, tol)?;
    let m = f.degree();
    let pairing = d.first.inner(a);
    let first = (pairing - m * d.value).abs();
    let second = (d.second_form(a)? - (m - T::one()) * pairing).abs();
    Ok(EulerResiduals {
        first,
        second,
        value: d.value,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    Convex,
    Concave,
    Neither,
    Indeterminate,
}

impl Convexity {
    pub fn is_convex_or_concave(self) -> bool {
        matches!(self, Convexity::Convex | Convexity::Concave)
    }
}

impl std::fmt::Display for Convexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Convexity::Convex => "convex",
            Convexity::Concave => "concave",
            Convexity::Neither => "neither",
            Convexity::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Convexity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(Convexity::Convex),
            "concave" => Ok(Convexity::Concave),
            "neither" => Ok(Convexity::Neither),
            "indeterminate" => Ok(Convexity::Indeterminate),
            other => Err(Error::Parse(format!("unknown convexity class {other:?}"))),
        }
    }
}

/// Result of the sampled convexity test. A linear function sets both flags and
/// reports [`Convexity::Convex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub convex: bool,
    pub concave: bool,
    pub verdict: Convexity,
    pub samples: usize,
}

/// Checks, at every sample, semidefiniteness of the eigenvalue Hessian and the
/// sign of every divided difference `(ḟ_i - ḟ_j)/(λ_i - λ_j)`.
pub fn convexity_classify<T: Scalar>(
    f: &CurvatureFunction<T>,
    samples: &[EigenvalueVector<T>],
    tol: &Tolerances<T>,
) -> Result<ConvexityReport> {
    if samples.is_empty() {
        return Err(Error::Invalid("convexity classification needs samples".into()));
    }
    let mut convex = true;
    let mut concave = true;
    let mut any_distinct = false;
    for s in samples {
        let l = s.as_slice();
        let grad = f.grad(s)?;
        let hess = f.hess(s)?;
        let eig = sym_eigen(&hess)?;
        let scale = hess.max_abs().max(T::one());
        let slack = tol.convexity * scale;
        let lo = eig.values[0];
        let hi = *eig.values.last().expect("nonempty");
        if lo < -slack {
            convex = false;
        }
        if hi > slack {
            concave = false;
        }
        for i in 0..l.len() {
            for j in i + 1..l.len() {
                if l[i] != l[j] {
                    any_distinct = true;
                }
                let dd = divided_difference(l, &grad, &hess, i, j, tol.coincident);
                if dd < -slack {
                    convex = false;
                }
                if dd > slack {
                    concave = false;
                }
            }
        }
    }
    let enough = samples.len() >= tol.min_convexity_samples && (any_distinct || f.dim() == 1);
    if !enough {
        return Ok(ConvexityReport {
            convex: false,
            concave: false,
            verdict: Convexity::Indeterminate,
            samples: samples.len(),
        });
    }
    let verdict = if convex {
        Convexity::Convex
    } else if concave {
        Convexity::Concave
    } else {
        Convexity::Neither
    };
    Ok(ConvexityReport {
        convex,
        concave,
        verdict,
        samples: samples.len(),
    })
}

/// The two pairing gaps between `f` (value `F`) and `g` (value `𝓕`), evaluated
/// in eigen-coordinates, with the magnitudes of the competing terms.
#[derive(Clone, Copy, Debug)]
pub struct PairingGaps<T> {
    /// `m (𝓕 Σ ḟ_i λ_i² - F Σ ġ_i λ_i²)`.
    pub first: T,
    /// `m Σ_j (F ġ_j - 𝓕 ḟ_j)`.
    pub second: T,
    pub first_scale: T,
    pub second_scale: T,
}

impl<T: Scalar> PairingGaps<T> {
    /// Both gaps at least `-tol * scale`.
    pub fn nonnegative(&self, tol: T) -> bool {
        self.first >= -tol * self.first_scale && self.second >= -tol * self.second_scale
    }

    /// Both gaps at most `tol * scale`.
    pub fn nonpositive(&self, tol: T) -> bool {
        self.first <= tol * self.first_scale && self.second <= tol * self.second_scale
    }
}

/// Requires both functions elliptic and of the same degree; `λ` must lie in Γ₊.
pub fn lemma23_gaps<T: Scalar>(
    f: &CurvatureFunction<T>,
    g: &CurvatureFunction<T>,
    lambda: &EigenvalueVector<T>,
) -> Result<PairingGaps<T>> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: f.to_string(),
            left_degree: f.degree().to_f64_lossy(),
            right: g.to_string(),
            right_degree: g.degree().to_f64_lossy(),
        });
    }
    for h in [f, g] {
        if !h.is_elliptic() {
            return Err(Error::Invalid(format!("{h} is not elliptic")));
        }
    }
    if !lambda.in_positive_cone() {
        return Err(Error::Domain {
            function: format!("({f}, {g})"),
            condition: "pairing gaps need λ in Γ₊".into(),
        });
    }
    let m = f.degree();
    let l = lambda.as_slice();
    let fv = f.eval(lambda)?;
    let gv = g.eval(lambda)?;
    let df = f.grad(lambda)?;
    let dg = g.grad(lambda)?;
    let sq = |d: &[T]| {
        d.iter()
            .zip(l)
            .fold(T::zero(), |acc, (&di, &li)| acc + di * li * li)
    };
    let sum = |d: &[T]| d.iter().fold(T::zero(), |acc, &v| acc + v);
    let (a1, b1) = (gv * sq(&df), fv * sq(&dg));
    let (a2, b2) = (fv * sum(&dg), gv * sum(&df));
    Ok(PairingGaps {
        first: m * (a1 - b1),
        second: m * (a2 - b2),
        first_scale: (m * a1).abs().max((m * b1).abs()),
        second_scale: (m * a2).abs().max((m * b2).abs()),
    })
}
