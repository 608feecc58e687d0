use std::fmt;

use super::EigenvalueVector;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Built-in families of symmetric curvature functions.
#[derive(Clone, Debug, PartialEq)]
pub enum Family<T> {
    /// `H = Σ λ_i`.
    Mean,
    /// Elementary symmetric polynomial `σ_k`.
    ElementarySymmetric(usize),
    /// Gauss curvature `K = Π λ_i` (equal to `σ_n`).
    Gauss,
    /// `sign(p) · G^p`. The sign keeps the function elliptic on Γ₊ for `p < 0`,
    /// which makes it negative there.
    Power { base: Box<Family<T>>, exponent: T },
    /// `sqrt(Σ λ_i²)`.
    Norm,
    /// `n · (Π λ_i)^{1/n}`.
    GeometricMean,
    /// `(2|A|² - H²)/H²`, surfaces only.
    Anisotropy,
}

impl<T: Scalar> Family<T> {
    fn degree(&self, n: usize) -> T {
        match self {
            Family::Mean | Family::Norm | Family::GeometricMean => T::one(),
            Family::ElementarySymmetric(k) => T::lit(*k as f64),
            Family::Gauss => T::lit(n as f64),
            Family::Power { base, exponent } => *exponent * base.degree(n),
            Family::Anisotropy => T::zero(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Family::ElementarySymmetric(k) if *k == 0 || *k > n => Err(Error::Invalid(format!(
                "sigma{k} undefined in dimension {n}"
            ))),
            Family::Anisotropy if n != 2 => Err(Error::Invalid(format!(
                "anisotropy ratio is defined for n = 2 only (got n = {n})"
            ))),
            Family::Power { base, exponent } => {
                if !exponent.is_finite() || *exponent == T::zero() {
                    return Err(Error::Invalid(format!(
                        "power exponent must be finite and nonzero (got {exponent})"
                    )));
                }
                if matches!(**base, Family::Anisotropy) {
                    return Err(Error::Invalid("anisotropy cannot be a power base".into()));
                }
                base.validate(n)
            }
            _ => Ok(()),
        }
    }

    fn needs_positive_cone(&self) -> bool {
        !matches!(self, Family::Mean | Family::Anisotropy)
    }

    fn value(&self, l: &[T]) -> T {
        match self {
            Family::Mean => l.iter().fold(T::zero(), |a, &v| a + v),
            Family::ElementarySymmetric(k) => elementary(l, *k),
            Family::Gauss => l.iter().fold(T::one(), |a, &v| a * v),
            Family::Power { base, exponent } => {
                exponent.signum() * base.value(l).powf(*exponent)
            }
            Family::Norm => sum_sq(l).sqrt(),
            Family::GeometricMean => {
                let n = T::lit(l.len() as f64);
                n * l.iter().fold(T::one(), |a, &v| a * v).powf(T::one() / n)
            }
            Family::Anisotropy => {
                let h = l.iter().fold(T::zero(), |a, &v| a + v);
                (T::lit(2.0) * sum_sq(l) - h * h) / (h * h)
            }
        }
    }

    fn grad(&self, l: &[T]) -> Vec<T> {
        let n = l.len();
        match self {
            Family::Mean => vec![T::one(); n],
            Family::ElementarySymmetric(k) => (0..n).map(|i| elementary_without(l, *k - 1, &[i])).collect(),
            Family::Gauss => (0..n).map(|i| elementary_without(l, n - 1, &[i])).collect(),
            Family::Power { base, exponent } => {
                let p = *exponent;
                let g = base.value(l);
                let c = p.signum() * p * g.powf(p - T::one());
                base.grad(l).into_iter().map(|d| c * d).collect()
            }
            Family::Norm => {
                let r = sum_sq(l).sqrt();
                l.iter().map(|&v| v / r).collect()
            }
            Family::GeometricMean => {
                let g = self.value(l);
                let nn = T::lit(n as f64);
                l.iter().map(|&v| g / (nn * v)).collect()
            }
            Family::Anisotropy => {
                let h = l.iter().fold(T::zero(), |a, &v| a + v);
                let s = sum_sq(l);
                let four = T::lit(4.0);
                l.iter()
                    .map(|&v| four * v / (h * h) - four * s / (h * h * h))
                    .collect()
            }
        }
    }

    fn hess(&self, l: &[T]) -> Mat<T> {
        let n = l.len();
        match self {
            Family::Mean => Mat::zeros(n),
            Family::ElementarySymmetric(k) => sigma_hess(l, *k),
            Family::Gauss => sigma_hess(l, n),
            Family::Power { base, exponent } => {
                let p = *exponent;
                let g = base.value(l);
                let dg = base.grad(l);
                let d2g = base.hess(l);
                let s = p.signum() * p;
                let outer = s * (p - T::one()) * g.powf(p - T::lit(2.0));
                let lin = s * g.powf(p - T::one());
                Mat::from_fn(n, |i, j| outer * dg[i] * dg[j] + lin * d2g.get(i, j))
            }
            Family::Norm => {
                let r = sum_sq(l).sqrt();
                Mat::from_fn(n, |i, j| {
                    let d = if i == j { T::one() } else { T::zero() };
                    (d - l[i] * l[j] / (r * r)) / r
                })
            }
            Family::GeometricMean => {
                let g = self.value(l);
                let nn = T::lit(n as f64);
                Mat::from_fn(n, |i, j| {
                    if i == j {
                        g * (T::one() - nn) / (nn * nn * l[i] * l[i])
                    } else {
                        g / (nn * nn * l[i] * l[j])
                    }
                })
            }
            Family::Anisotropy => {
                let h = l.iter().fold(T::zero(), |a, &v| a + v);
                let s = sum_sq(l);
                let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);
                Mat::from_fn(n, |i, j| {
                    let d = if i == j { T::lit(4.0) / h2 } else { T::zero() };
                    d - T::lit(8.0) * (l[i] + l[j]) / h3 + T::lit(12.0) * s / h4
                })
            }
        }
    }
}

fn sum_sq<T: Scalar>(l: &[T]) -> T {
    l.iter().fold(T::zero(), |a, &v| a + v * v)
}

/// `σ_k` of the entries of `l`.
fn elementary<T: Scalar>(l: &[T], k: usize) -> T {
    elementary_without(l, k, &[])
}

/// `σ_k` of the entries of `l` with the indices in `skip` removed.
fn elementary_without<T: Scalar>(l: &[T], k: usize, skip: &[usize]) -> T {
    let mut e = [T::zero(); 4];
    e[0] = T::one();
    for (i, &v) in l.iter().enumerate() {
        if skip.contains(&i) {
            continue;
        }
        for j in (1..=k.min(3)).rev() {
            e[j] += v * e[j - 1];
        }
    }
    if k > 3 {
        T::zero()
    } else {
        e[k]
    }
}

fn sigma_hess<T: Scalar>(l: &[T], k: usize) -> Mat<T> {
    Mat::from_fn(l.len(), |i, j| {
        if i == j || k < 2 {
            T::zero()
        } else {
            elementary_without(l, k - 2, &[i, j])
        }
    })
}

/// A curvature function `f(λ)` on `n` principal curvatures with its exact degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureFunction<T> {
    family: Family<T>,
    n: usize,
    degree: T,
}

impl<T: Scalar> CurvatureFunction<T> {
    pub fn new(family: Family<T>, n: usize) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Invalid(format!("dimension n = {n} outside 1..=3")));
        }
        family.validate(n)?;
        let degree = family.degree(n);
        Ok(Self { family, n, degree })
    }

    /// Parses the textual grammar (`H`, `K`, `sigma2`, `norm`, `geomean`,
    /// `pow(H,-1)`, `anisotropy`) for dimension `n`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        Self::new(super::parse::parse_family(spec)?, n)
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Homogeneity degree `m`, fixed by the family (never estimated).
    #[inline]
    pub fn degree(&self) -> T {
        self.degree
    }

    /// `∂f/∂λ_i > 0` on Γ₊ for every family except the anisotropy ratio.
    pub fn is_elliptic(&self) -> bool {
        !matches!(self.family, Family::Anisotropy)
    }

    pub fn requires_positive_cone(&self) -> bool {
        self.family.needs_positive_cone()
    }

    pub fn check_domain(&self, l: &[T]) -> Result<()> {
        if l.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: l.len(),
            });
        }
        if let Some(i) = l.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("λ_{} = {}", i + 1, l[i])));
        }
        if self.family.needs_positive_cone() {
            if let Some(i) = l.iter().position(|&v| v <= T::zero()) {
                return Err(Error::Domain {
                    function: self.to_string(),
                    condition: format!(
                        "λ_{} = {} is not positive (Γ₊ requires all principal curvatures > 0)",
                        i + 1,
                        l[i]
                    ),
                });
            }
        }
        if matches!(self.family, Family::Anisotropy) {
            let h = l.iter().fold(T::zero(), |a, &v| a + v);
            if !(h * h > T::zero()) || !(h * h).is_normal() {
                return Err(Error::Domain {
                    function: self.to_string(),
                    condition: format!("H² > 0 required (H = {h})"),
                });
            }
        }
        Ok(())
    }

    pub fn eval(&self, l: &EigenvalueVector<T>) -> Result<T> {
        self.eval_slice(l.as_slice())
    }

    pub fn grad(&self, l: &EigenvalueVector<T>) -> Result<Vec<T>> {
        self.grad_slice(l.as_slice())
    }

    pub fn hess(&self, l: &EigenvalueVector<T>) -> Result<Mat<T>> {
        self.hess_slice(l.as_slice())
    }

    pub fn eval_slice(&self, l: &[T]) -> Result<T> {
        self.check_domain(l)?;
        Ok(self.family.value(l))
    }

    pub fn grad_slice(&self, l: &[T]) -> Result<Vec<T>> {
        self.check_domain(l)?;
        Ok(self.family.grad(l))
    }

    pub fn hess_slice(&self, l: &[T]) -> Result<Mat<T>> {
        self.check_domain(l)?;
        Ok(self.family.hess(l))
    }

    /// `f(1, ..., 1)`.
    pub fn value_at_ones(&self) -> T {
        self.family.value(&vec![T::one(); self.n])
    }
}

impl<T: Scalar> fmt::Display for Family<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Mean => write!(f, "H"),
            Family::ElementarySymmetric(k) => write!(f, "sigma{k}"),
            Family::Gauss => write!(f, "K"),
            Family::Power { base, exponent } => {
                write!(f, "pow({base},{})", exponent.to_f64_lossy())
            }
            Family::Norm => write!(f, "norm"),
            Family::GeometricMean => write!(f, "geomean"),
            Family::Anisotropy => write!(f, "anisotropy"),
        }
    }
}

impl<T: Scalar> fmt::Display for CurvatureFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family.fmt(f)
    }
}
