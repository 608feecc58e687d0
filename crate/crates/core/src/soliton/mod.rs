//! The self-similar equation `F + τZ = 0`: exact geodesic-sphere solutions,
//! least-squares fits of `τ` on sampled hypersurfaces, and the pinching
//! calculator for the umbilicity theorem.

pub mod pinching;

pub use pinching::{
    admissibility, admissibility_for, binding_root, pinching_quadratics, threshold_2iii, Condition,
    PinchingVerdict,
};

use serde::{Deserialize, Serialize};

use crate::curvfun::CurvatureFunction;
use crate::error::{Error, Result};
use crate::hypersurface::{PointGeometry, ShapeData};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::spaceform::{geodesic_sphere_point, support_value, SpaceFormParams};

/// Lower end of the radius bracket used by [`solve_sphere_radius`].
pub const RADIUS_MIN: f64 = 1e-6;
/// Upper end of the radius bracket used by [`solve_sphere_radius`].
pub const RADIUS_MAX: f64 = 50.0;
pub const BISECTION_ITERATIONS: usize = 200;
/// Fewest samples accepted by [`fit_tau`].
pub const MIN_FIT_SAMPLES: usize = 16;
/// Log-spaced samples used to check that a radius solve has a single root.
const MONOTONICITY_SCAN: usize = 512;

/// Least-squares fit of `F + τZ = 0` over weighted samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonReport {
    pub tau_fit: f64,
    /// Area-weighted RMS of `F + τZ`.
    pub rms_residual: f64,
    /// `rms(F + τZ) / rms(F)`.
    pub relative_residual: f64,
    pub max_residual: f64,
    pub sample_count: usize,
}

/// The `τ` for which the centered geodesic sphere of radius `radius` solves
/// `F + τZ = 0`: `f(1,…,1)·ch_c(R)^m / sh_c(R)^{m+1}`.
pub fn sphere_tau<T: Scalar>(f: &CurvatureFunction<T>, radius: T, space: &SpaceFormParams<T>) -> Result<T> {
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::Invalid(format!("sphere radius {radius} must be positive")));
    }
    let f1 = f.value_at_ones();
    if f1 == T::zero() {
        return Err(Error::Degenerate(format!(
            "{f} vanishes at (1,…,1): no sphere soliton with nonzero τ"
        )));
    }
    if !f.is_elliptic() {
        return Err(Error::Invalid(format!("{f} is not elliptic")));
    }
    let m = f.degree();
    let (s, c) = (space.shc(radius), space.chc(radius));
    let tau = f1 * c.powf(m) / s.powf(m + T::one());
    if !tau.is_finite() {
        return Err(Error::NonFinite(format!("sphere τ for {f} at R = {radius}")));
    }
    Ok(tau)
}

/// Radius of the centered geodesic sphere solving `F + τZ = 0`, by bisection
/// on `[RADIUS_MIN, RADIUS_MAX]`.
pub fn solve_sphere_radius<T: Scalar>(f: &CurvatureFunction<T>, tau: T, space: &SpaceFormParams<T>) -> Result<T> {
    if space.c() == T::zero() && f.degree() == -T::one() {
        return Err(Error::Degenerate(format!(
            "sphere τ for {f} is independent of the radius in flat space"
        )));
    }
    let g = |r: T| sphere_tau(f, r, space).map(|t| t - tau);
    let (mut lo, mut hi) = (T::lit(RADIUS_MIN), T::lit(RADIUS_MAX));
    let (mut glo, ghi) = (g(lo)?, g(hi)?);
    if glo == T::zero() {
        return Ok(lo);
    }
    if ghi == T::zero() {
        return Ok(hi);
    }
    // Count crossings on a logarithmic scan; the bisection is only meaningful
    // when exactly one radius matches.
    let ratio = (T::lit(RADIUS_MAX) / lo).ln();
    let mut crossings = 0;
    let mut prev = glo;
    for k in 1..=MONOTONICITY_SCAN {
        let r = lo * (ratio * T::lit(k as f64 / MONOTONICITY_SCAN as f64)).exp();
        let g_r = if k == MONOTONICITY_SCAN { ghi } else { g(r)? };
        if g_r.signum() != prev.signum() {
            crossings += 1;
        }
        prev = g_r;
    }
    if crossings == 0 {
        return Err(Error::NoRoot(format!(
            "sphere τ for {f} does not cross {tau} on [{RADIUS_MIN}, {RADIUS_MAX}]"
        )));
    }
    if crossings > 1 {
        return Err(Error::Invalid(format!(
            "sphere τ for {f} is not monotone: {crossings} radii in [{RADIUS_MIN}, {RADIUS_MAX}] give τ = {tau}"
        )));
    }
    for _ in 0..BISECTION_ITERATIONS {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == T::zero() {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// Deterministic unit directions in `R^{n+1}`.
fn sphere_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::{PI, TAU};
    match n {
        1 => (0..count)
            .map(|i| {
                let t = TAU * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        2 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => (0..count)
            .map(|i| {
                let eta = 0.5 * PI * (i as f64 + 0.5) / count as f64;
                let (a, b) = (TAU * i as f64 * 0.618_033_988_749_895, TAU * i as f64 * 0.754_877_666_246_693);
                vec![eta.cos() * a.cos(), eta.cos() * a.sin(), eta.sin() * b.cos(), eta.sin() * b.sin()]
            })
            .collect(),
    }
}

/// `count` samples of the centered geodesic sphere of radius `radius` in the
/// `(n+1)`-dimensional space form, with exact principal curvatures
/// `ch_c(R)/sh_c(R)`, support values from the model coordinates and equal weights.
pub fn geodesic_sphere_samples(
    n: usize,
    radius: f64,
    space: &SpaceFormParams<f64>,
    count: usize,
) -> Result<ShapeData> {
    if !(1..=3).contains(&n) {
        return Err(Error::Dimension { expected: 3, got: n });
    }
    if !(radius > 0.0) {
        return Err(Error::Invalid(format!("sphere radius {radius} must be positive")));
    }
    if count == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let (s, c) = (space.shc(radius), space.chc(radius));
    let lambda = c / s;
    let unit_area = match n {
        1 => std::f64::consts::TAU,
        2 => 4.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI.powi(2),
    };
    let weight = unit_area * s.powi(n as i32) / count as f64;
    let points = sphere_directions(n, count)
        .into_iter()
        .map(|dir| {
            let (x, nu) = geodesic_sphere_point(space, radius, &dir);
            let sd = support_value(space, &x, &nu)?;
            let ident = Mat::identity(n);
            Ok(PointGeometry {
                position: x,
                normal: nu,
                metric: ident,
                second_form: ident.scale(lambda),
                weingarten: ident.scale(lambda),
                principal: vec![lambda; n],
                mean: n as f64 * lambda,
                norm_sq: n as f64 * lambda * lambda,
                a_squared: ident.scale(lambda * lambda),
                support: sd.support,
                radial_tangent: sd.tangential.iter().map(|t| t * s).collect(),
                area_weight: weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapeData { dim: n, points })
}

fn check_dim(shape: &ShapeData, f: &CurvatureFunction<f64>) -> Result<()> {
    if shape.dim != f.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            got: shape.dim,
        });
    }
    Ok(())
}

fn values(shape: &ShapeData, f: &CurvatureFunction<f64>) -> Result<Vec<f64>> {
    check_dim(shape, f)?;
    shape.points.iter().map(|p| f.eval_slice(&p.principal)).collect()
}

/// Pointwise `F + τZ`.
pub fn residual_field(shape: &ShapeData, f: &CurvatureFunction<f64>, tau: f64) -> Result<Vec<f64>> {
    let fv = values(shape, f)?;
    Ok(fv.iter().zip(&shape.points).map(|(v, p)| v + tau * p.support).collect())
}

/// Weighted least-squares `τ` minimizing `Σ wᵢ(Fᵢ + τZᵢ)²`.
pub fn fit_tau(shape: &ShapeData, f: &CurvatureFunction<f64>) -> Result<SolitonReport> {
    if shape.len() < MIN_FIT_SAMPLES {
        return Err(Error::Invalid(format!(
            "fit needs at least {MIN_FIT_SAMPLES} samples (got {})",
            shape.len()
        )));
    }
    let fv = values(shape, f)?;
    let (mut wzz, mut wfz, mut wff, mut wsum) = (0.0, 0.0, 0.0, 0.0);
    for (v, p) in fv.iter().zip(&shape.points) {
        let (w, z) = (p.area_weight, p.support);
        wzz += w * z * z;
        wfz += w * v * z;
        wff += w * v * v;
        wsum += w;
    }
    if !(wzz > 0.0) || !(wsum > 0.0) {
        return Err(Error::Degenerate("weighted Σ Z² vanishes; τ is undetermined".into()));
    }
    let tau = -wfz / wzz;
    let mut wrr = 0.0;
    let mut max_residual = 0.0f64;
    for (v, p) in fv.iter().zip(&shape.points) {
        let r = v + tau * p.support;
        wrr += p.area_weight * r * r;
        max_residual = max_residual.max(r.abs());
    }
    let rms = (wrr / wsum).sqrt();
    let rms_f = (wff / wsum).sqrt();
    let relative = if rms == 0.0 {
        0.0
    } else if rms_f > 0.0 {
        rms / rms_f
    } else {
        f64::INFINITY
    };
    Ok(SolitonReport {
        tau_fit: tau,
        rms_residual: rms,
        relative_residual: relative,
        max_residual,
        sample_count: shape.len(),
    })
}
