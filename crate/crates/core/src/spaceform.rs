//! Space-form scalars `sh_c`, `ch_c`, the generalized support function
//! `Z = sh_c(ρ)⟨∂_ρ, ν⟩` and the Hessian of the distance function.
//!
//! For `c < 0` points and normals are given in the hyperboloid model
//! `{x : ⟨x,x⟩_L = 1/c, x_0 > 0}` of `ℝ^{1,n+1}` with Lorentz pairing
//! `⟨x,y⟩_L = -x_0 y_0 + Σ x_i y_i`; the base point is `o = e_0/sqrt(-c)`.
//! For `c = 0` they are plain Euclidean vectors and the base point is the origin.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Threshold on `|c| t²` below which the Taylor branch is used.
const TAYLOR_SWITCH: f64 = 1e-8;

/// `sh_c(t)`: `sin(√c t)/√c`, `t`, or `sinh(√-c t)/√-c`.
pub fn shc<T: Scalar>(c: T, t: T) -> T {
    let x = c * t * t;
    if x.abs() < T::lit(TAYLOR_SWITCH) {
        // t (1 - x/6 + x²/120 - x³/5040 + x⁴/362880)
        let terms = [1.0, -1.0 / 6.0, 1.0 / 120.0, -1.0 / 5040.0, 1.0 / 362_880.0];
        return t * horner(&terms, x);
    }
    if c > T::zero() {
        let k = c.sqrt();
        (k * t).sin() / k
    } else {
        let k = (-c).sqrt();
        (k * t).sinh() / k
    }
}

/// `ch_c(t)`: `cos(√c t)`, `1`, or `cosh(√-c t)`.
pub fn chc<T: Scalar>(c: T, t: T) -> T {
    let x = c * t * t;
    if x.abs() < T::lit(TAYLOR_SWITCH) {
        let terms = [1.0, -0.5, 1.0 / 24.0, -1.0 / 720.0, 1.0 / 40_320.0];
        return horner(&terms, x);
    }
    if c > T::zero() {
        (c.sqrt() * t).cos()
    } else {
        ((-c).sqrt() * t).cosh()
    }
}

fn horner<T: Scalar>(coeffs: &[f64], x: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &a| acc * x + T::lit(a))
}

/// Ambient sectional curvature `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceFormParams<T> {
    c: T,
}

impl<T: Scalar> SpaceFormParams<T> {
    /// Accepts `c <= 0` only, the range covered by the soliton classification.
    pub fn new(c: T) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite(format!("curvature c = {c}")));
        }
        if c > T::zero() {
            return Err(Error::Invalid(format!(
                "ambient curvature c = {c} > 0 is not supported (c <= 0 required)"
            )));
        }
        Ok(Self { c })
    }

    /// Any finite `c`; used by the positive-curvature escape hatch.
    pub fn unrestricted(c: T) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite(format!("curvature c = {c}")));
        }
        Ok(Self { c })
    }

    pub fn euclidean() -> Self {
        Self { c: T::zero() }
    }

    #[inline]
    pub fn c(&self) -> T {
        self.c
    }

    pub fn shc(&self, t: T) -> T {
        shc(self.c, t)
    }

    pub fn chc(&self, t: T) -> T {
        chc(self.c, t)
    }
}

/// Decomposition of `∂_ρ` at a hypersurface point together with `Z`.
#[derive(Clone, Debug)]
pub struct SupportData<T> {
    /// Distance to the base point.
    pub rho: T,
    /// `⟨∂_ρ, ν⟩`.
    pub normal_component: T,
    /// `∂_ρ^⊤`, in the coordinates of the input vectors.
    pub tangential: Vec<T>,
    /// `Z = sh_c(ρ)⟨∂_ρ, ν⟩`.
    pub support: T,
}

impl<T: Scalar> SupportData<T> {
    /// `‖∂_ρ^⊤‖` in the ambient metric (Euclidean or Lorentz).
    pub fn tangential_norm(&self, c: T) -> T {
        if c < T::zero() {
            lorentz(&self.tangential, &self.tangential).max(T::zero()).sqrt()
        } else {
            dot(&self.tangential, &self.tangential).sqrt()
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Lorentz pairing `-a_0 b_0 + Σ a_i b_i`.
pub fn lorentz<T: Scalar>(a: &[T], b: &[T]) -> T {
    dot(&a[1..], &b[1..]) - a[0] * b[0]
}

/// Support data of the point `x` with inward unit normal `nu`, base point at the
/// model origin.
pub fn support_value<T: Scalar>(space: &SpaceFormParams<T>, x: &[T], nu: &[T]) -> Result<SupportData<T>> {
    let c = space.c();
    if x.len() != nu.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: nu.len(),
        });
    }
    if x.iter().chain(nu).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("support point or normal".into()));
    }
    let unit_tol = T::lit(1e-10).max(T::epsilon() * T::lit(64.0));
    if c > T::zero() {
        return Err(Error::Invalid("support function requires c <= 0".into()));
    }
    if c == T::zero() {
        let norm_nu = dot(nu, nu).sqrt();
        if (norm_nu - T::one()).abs() > unit_tol {
            return Err(Error::Invalid(format!("normal is not unit (|ν| = {norm_nu})")));
        }
        let rho = dot(x, x).sqrt();
        if rho == T::zero() {
            return Err(Error::Degenerate("point coincides with the base point; ∂_ρ undefined".into()));
        }
        let support = dot(x, nu);
        let normal_component = support / rho;
        let tangential = x
            .iter()
            .zip(nu)
            .map(|(&xi, &ni)| xi / rho - normal_component * ni)
            .collect();
        return Ok(SupportData {
            rho,
            normal_component,
            tangential,
            support,
        });
    }
    let k = (-c).sqrt();
    let nn = lorentz(nu, nu);
    if (nn - T::one()).abs() > unit_tol {
        return Err(Error::Invalid(format!("normal is not Lorentz-unit (⟨ν,ν⟩ = {nn})")));
    }
    // ρ = arcosh(-c ⟨x, o⟩_L · (-1/c)...) reduces to arcosh(k x_0)/k
    let cosh_arg = (k * x[0]).max(T::one());
    let rho = cosh_arg.acosh() / k;
    if rho == T::zero() {
        return Err(Error::Degenerate("point coincides with the base point; ∂_ρ undefined".into()));
    }
    let (kr_sinh, kr_cosh) = ((k * rho).sinh(), (k * rho).cosh());
    // ∂_ρ = k (x cosh(kρ) - o) / sinh(kρ), o = e_0 / k
    let d_rho: Vec<T> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let o = if i == 0 { T::one() / k } else { T::zero() };
            k * (xi * kr_cosh - o) / kr_sinh
        })
        .collect();
    let normal_component = lorentz(&d_rho, nu);
    let tangential = d_rho
        .iter()
        .zip(nu)
        .map(|(&d, &n)| d - normal_component * n)
        .collect();
    let support = space.shc(rho) * normal_component;
    Ok(SupportData {
        rho,
        normal_component,
        tangential,
        support,
    })
}

/// Slot classification for the Hessian of the distance function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialSlot {
    /// Along `∂_ρ`.
    Radial,
    /// Orthogonal to `∂_ρ`.
    Orthogonal,
}

/// Coefficient of `∇̄²ρ`: `0` radially and `ch_c(ρ)/sh_c(ρ)` on the orthogonal complement.
pub fn rho_hessian<T: Scalar>(c: T, rho: T, slot: RadialSlot) -> Result<T> {
    if !(rho > T::zero()) {
        return Err(Error::Invalid(format!("distance ρ = {rho} must be positive")));
    }
    Ok(match slot {
        RadialSlot::Radial => T::zero(),
        RadialSlot::Orthogonal => chc(c, rho) / shc(c, rho),
    })
}

/// Point at distance `radius` from the base point in unit direction `dir`
/// (`dir` has `n+1` Euclidean components), with the inward unit normal of the
/// centered geodesic sphere through it. Returns model coordinates.
pub fn geodesic_sphere_point<T: Scalar>(
    space: &SpaceFormParams<T>,
    radius: T,
    dir: &[T],
) -> (Vec<T>, Vec<T>) {
    let c = space.c();
    if c == T::zero() {
        let x = dir.iter().map(|&d| d * radius).collect();
        let nu = dir.iter().map(|&d| -d).collect();
        return (x, nu);
    }
    let k = (-c).sqrt();
    let (s, ch) = ((k * radius).sinh(), (k * radius).cosh());
    let mut x = Vec::with_capacity(dir.len() + 1);
    let mut nu = Vec::with_capacity(dir.len() + 1);
    x.push(ch / k);
    nu.push(-s);
    for &d in dir {
        x.push(d * s / k);
        nu.push(-d * ch);
    }
    (x, nu)
}
