use serde::{Deserialize, Serialize};

use crate::curvfun::CurvatureFunction;
use crate::error::Result;
use crate::hypersurface::{DiscreteHypersurface, GeometryOptions, ShapeData};
use crate::soliton::{fit_tau, SolitonReport};

/// Pinching and umbilicity diagnostics of a convex hypersurface.
///
/// For curves there is a single curvature per point, so `r_max` is
/// `max k / min k` over the curve, `f_aniso_max` is
/// `((k_max − k_min)/(k_max + k_min))²`, `ahh_max = 1` and `umb_max = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monitors {
    pub r_max: f64,
    pub f_aniso_max: f64,
    /// `max |A|²/H²`.
    pub ahh_max: f64,
    /// `max (n|A|² − H²)`.
    pub umb_max: f64,
    pub max_curvature: f64,
    pub measure: f64,
    /// Soliton fit with the support function measured from the centroid.
    pub soliton: SolitonReport,
}

/// `(min, max)` of all principal curvatures.
pub(crate) fn curvature_range(shape: &ShapeData) -> (f64, f64) {
    shape
        .points
        .iter()
        .flat_map(|p| p.principal.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Pinching ratio with the curve convention of [`Monitors`].
pub fn pinching_ratio(shape: &ShapeData) -> f64 {
    if shape.dim == 1 {
        let (lo, hi) = curvature_range(shape);
        hi / lo
    } else {
        shape.r_max()
    }
}

/// Area-weighted centroid of the samples, padded to three components.
pub fn centroid(shape: &ShapeData) -> [f64; 3] {
    let mut c = [0.0; 3];
    let mut w = 0.0;
    for p in &shape.points {
        for (ck, xk) in c.iter_mut().zip(&p.position) {
            *ck += p.area_weight * xk;
        }
        w += p.area_weight;
    }
    c.map(|v| v / w)
}

pub fn monitors(surface: &DiscreteHypersurface, f: &CurvatureFunction<f64>) -> Result<Monitors> {
    let shape = surface.geometry(&GeometryOptions::default())?;
    let center = centroid(&shape);
    let mut opts = GeometryOptions::with_base_point(center);
    if let DiscreteHypersurface::Revolution(_) = surface {
        opts.base_point[1] = 0.0;
        opts.base_point[2] = 0.0;
    }
    let centered = surface.geometry(&opts)?;
    monitors_from(&centered, f)
}

/// Monitors of precomputed geometry; `shape` supplies the support values used in the fit.
pub fn monitors_from(shape: &ShapeData, f: &CurvatureFunction<f64>) -> Result<Monitors> {
    let (kmin, kmax) = curvature_range(shape);
    let (f_aniso_max, ahh_max, umb_max) = if shape.dim == 1 {
        (((kmax - kmin) / (kmax + kmin)).powi(2), 1.0, 0.0)
    } else {
        let n = shape.dim as f64;
        shape.points.iter().fold((0.0f64, 0.0f64, f64::NEG_INFINITY), |(fa, ah, um), p| {
            let h2 = p.mean * p.mean;
            (
                fa.max((2.0 * p.norm_sq - h2) / h2),
                ah.max(p.norm_sq / h2),
                um.max(n * p.norm_sq - h2),
            )
        })
    };
    Ok(Monitors {
        r_max: pinching_ratio(shape),
        f_aniso_max,
        ahh_max,
        umb_max,
        max_curvature: kmax,
        measure: shape.measure(),
        soliton: fit_tau(shape, f)?,
    })
}
