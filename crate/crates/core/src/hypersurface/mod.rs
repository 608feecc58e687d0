//! Convex hypersurfaces on structured grids and their extrinsic geometry.
//!
//! Three representations are supported:
//!
//! - [`ClosedCurve`]: `M` planar points on a periodic uniform parameter grid (n = 1);
//! - [`RevolutionProfile`]: `M + 1` samples of a profile `(x(s), y(s))`, `s = πj/M`,
//!   with `y > 0` inside and both ends on the axis, rotated about the x-axis (n = 2);
//! - [`Ellipsoid`]: analytic ellipse or ellipsoid given by its semi-axes.
//!
//! Derivatives use fourth-order central stencils. Revolution profiles are
//! continued across the poles by reflection (`x` even, `y` odd), so the same
//! stencil is used at every sample. Normals point inward; convexity therefore
//! means every principal curvature is positive.

mod curve;
mod ellipsoid;
pub mod jet;
mod revolution;
pub mod snapshot;
pub mod stencil;

pub use curve::curve_geometry;
pub use ellipsoid::{ellipsoid_geometry, principal_closed_form};
pub use jet::{codazzi_residual, covariant_hessian, lemma31_residual, ScalarField, TensorSample};
pub use revolution::revolution_geometry;
pub use snapshot::Snapshot;

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Parameter distance from the poles excluded from residual maxima on surfaces.
pub const POLE_MARGIN: f64 = 0.35;

/// Closed planar curve sampled on a uniform periodic parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    points: Vec<[f64; 2]>,
}

impl ClosedCurve {
    pub const MIN_SAMPLES: usize = 16;

    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < Self::MIN_SAMPLES {
            return Err(Error::Invalid(format!(
                "curve needs at least {} samples (got {})",
                Self::MIN_SAMPLES,
                points.len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("curve samples".into()));
        }
        Ok(Self { points })
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> [f64; 2]) -> Result<Self> {
        let h = std::f64::consts::TAU / m as f64;
        Self::new((0..m).map(|i| f(i as f64 * h)).collect())
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Uniform parameter spacing `2π/M`.
    pub fn spacing(&self) -> f64 {
        std::f64::consts::TAU / self.points.len() as f64
    }
}

/// Meridian profile of a closed surface of revolution about the x-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct RevolutionProfile {
    points: Vec<[f64; 2]>,
}

impl RevolutionProfile {
    pub const MIN_INTERVALS: usize = 16;
    /// How far the end samples may sit off the axis before rejection.
    pub const AXIS_TOL: f64 = 1e-6;

    /// Validates the profile, snaps both ends onto the axis and orients it so
    /// that it runs from the larger to the smaller x-coordinate over `y > 0`.
    pub fn new(mut points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < Self::MIN_INTERVALS + 1 {
            return Err(Error::Profile(format!(
                "profile needs at least {} samples (got {})",
                Self::MIN_INTERVALS + 1,
                points.len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("profile samples".into()));
        }
        let last = points.len() - 1;
        let scale = points
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()))
            .fold(1.0, f64::max);
        for &end in &[0, last] {
            if points[end][1].abs() > Self::AXIS_TOL * scale {
                return Err(Error::Profile(format!(
                    "end sample {end} is off the axis (y = {})",
                    points[end][1]
                )));
            }
            points[end][1] = 0.0;
        }
        if let Some(j) = (1..last).find(|&j| points[j][1] <= 0.0) {
            return Err(Error::Profile(format!(
                "profile touches the axis in the interior at sample {j}"
            )));
        }
        if points[0][0] < points[last][0] {
            points.reverse();
        }
        Ok(Self { points })
    }

    /// Samples `f(s)` at `s = πj/M`, `j = 0..=M`.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> [f64; 2]) -> Result<Self> {
        let h = std::f64::consts::PI / m as f64;
        Self::new((0..=m).map(|j| f(j as f64 * h)).collect())
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Number of intervals `M`.
    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }

    /// Uniform parameter spacing `π/M`.
    pub fn spacing(&self) -> f64 {
        std::f64::consts::PI / self.intervals() as f64
    }

    /// Sample `j` continued across the poles by reflection.
    pub(crate) fn ghost(&self, j: isize) -> [f64; 2] {
        let m = self.intervals() as isize;
        if j < 0 {
            let p = self.points[(-j) as usize];
            [p[0], -p[1]]
        } else if j > m {
            let p = self.points[(2 * m - j) as usize];
            [p[0], -p[1]]
        } else {
            self.points[j as usize]
        }
    }
}

/// Analytic ellipse (two semi-axes) or ellipsoid (three), centered at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    axes: Vec<f64>,
    grid: usize,
}

impl Ellipsoid {
    pub fn new(axes: Vec<f64>, grid: usize) -> Result<Self> {
        if !(2..=3).contains(&axes.len()) {
            return Err(Error::Invalid(format!(
                "ellipsoid needs 2 or 3 semi-axes (got {})",
                axes.len()
            )));
        }
        if axes.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::Invalid("semi-axes must be positive and finite".into()));
        }
        if grid < 16 || !grid.is_multiple_of(2) {
            return Err(Error::Invalid(format!("ellipsoid grid {grid} must be even and >= 16")));
        }
        Ok(Self { axes, grid })
    }

    pub fn axes(&self) -> &[f64] {
        &self.axes
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Parameter spacing `2π/M`, shared by both parameter directions.
    pub fn spacing(&self) -> f64 {
        std::f64::consts::TAU / self.grid as f64
    }

    /// Number of parameter points.
    pub fn len(&self) -> usize {
        if self.axes.len() == 2 {
            self.grid
        } else {
            self.grid * self.grid / 2
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Parameter point `k`: `u_i = 2πi/M`, and for surfaces `v_j = -π/2 + 2π(j + 1/2)/M`
    /// with `k = jM + i`.
    pub fn parameter(&self, k: usize) -> [f64; 2] {
        let h = self.spacing();
        let m = self.grid;
        if self.axes.len() == 2 {
            return [k as f64 * h, 0.0];
        }
        let (i, j) = (k % m, k / m);
        [i as f64 * h, -std::f64::consts::FRAC_PI_2 + (j as f64 + 0.5) * h]
    }

    pub fn parameters(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|k| self.parameter(k)).collect()
    }
}

/// A convex hypersurface snapshot.
#[derive(Clone, Debug, PartialEq)]
pub enum DiscreteHypersurface {
    Curve(ClosedCurve),
    Revolution(RevolutionProfile),
    Ellipsoid(Ellipsoid),
}

impl DiscreteHypersurface {
    pub fn circle(radius: f64, m: usize) -> Result<Self> {
        Self::ellipse(radius, radius, m)
    }

    /// Discrete ellipse with semi-axis `a` along x and `b` along y.
    pub fn ellipse(a: f64, b: f64, m: usize) -> Result<Self> {
        positive(&[a, b])?;
        Ok(Self::Curve(ClosedCurve::from_fn(m, |t| [a * t.cos(), b * t.sin()])?))
    }

    pub fn sphere(radius: f64, m: usize) -> Result<Self> {
        Self::spheroid(radius, radius, m)
    }

    /// Spheroid with semi-axis `axial` along the rotation axis and `equatorial` across it.
    pub fn spheroid(axial: f64, equatorial: f64, m: usize) -> Result<Self> {
        positive(&[axial, equatorial])?;
        Ok(Self::Revolution(RevolutionProfile::from_fn(m, |s| {
            [axial * s.cos(), equatorial * s.sin()]
        })?))
    }

    pub fn ellipsoid(axes: &[f64], grid: usize) -> Result<Self> {
        Ok(Self::Ellipsoid(Ellipsoid::new(axes.to_vec(), grid)?))
    }

    /// Dimension `n` of the hypersurface.
    pub fn dim(&self) -> usize {
        match self {
            Self::Curve(_) => 1,
            Self::Revolution(_) => 2,
            Self::Ellipsoid(e) => e.axes.len() - 1,
        }
    }

    pub fn grid_size(&self) -> usize {
        match self {
            Self::Curve(c) => c.len(),
            Self::Revolution(p) => p.intervals(),
            Self::Ellipsoid(e) => e.grid,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Curve(_) => "curve",
            Self::Revolution(_) => "revolution",
            Self::Ellipsoid(_) => "ellipsoid",
        }
    }

    pub fn geometry(&self, opts: &GeometryOptions) -> Result<ShapeData> {
        match self {
            Self::Curve(c) => curve_geometry(c, opts),
            Self::Revolution(p) => revolution_geometry(p, opts),
            Self::Ellipsoid(e) => {
                let points = e
                    .parameters()
                    .iter()
                    .map(|uv| {
                        let param = if e.axes.len() == 2 { &uv[..1] } else { &uv[..] };
                        ellipsoid::point_with_weight(&e.axes, param, &opts.base_point, e.spacing())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(ShapeData {
                    dim: self.dim(),
                    points,
                })
            }
        }
    }
}

fn positive(v: &[f64]) -> Result<()> {
    if v.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::Invalid(format!("shape parameters must be positive: {v:?}")));
    }
    Ok(())
}

/// Options for geometry extraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryOptions {
    /// Base point of the support function (ambient coordinates, z ignored for curves).
    pub base_point: [f64; 3],
    /// Largest admissible angle between a revolution profile and the axis normal at a pole.
    pub pole_tol: f64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        Self {
            base_point: [0.0; 3],
            pole_tol: 1e-6,
        }
    }
}

impl GeometryOptions {
    pub fn with_base_point(base_point: [f64; 3]) -> Self {
        Self {
            base_point,
            ..Self::default()
        }
    }
}

/// Extrinsic geometry at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointGeometry {
    pub position: Vec<f64>,
    /// Inward unit normal.
    pub normal: Vec<f64>,
    /// `g_ij` in the sampling coordinates.
    pub metric: Mat<f64>,
    /// `h_ij = ⟨∂_i∂_j X, ν⟩`.
    pub second_form: Mat<f64>,
    /// `h_i^j = h_ik g^{kj}`.
    pub weingarten: Mat<f64>,
    /// Principal curvatures (for revolution surfaces: meridian, then parallel).
    pub principal: Vec<f64>,
    pub mean: f64,
    /// `|A|² = Σ λ_i²`.
    pub norm_sq: f64,
    /// `A²_ij = h_ik g^{kl} h_lj`.
    pub a_squared: Mat<f64>,
    /// `Z = ⟨X - base, ν⟩`.
    pub support: f64,
    /// Tangential part of `X - base`.
    pub radial_tangent: Vec<f64>,
    /// Area (length) element attached to the sample.
    pub area_weight: f64,
}

impl PointGeometry {
    /// `λ_max / λ_min`.
    pub fn pinching(&self) -> f64 {
        let (lo, hi) = self
            .principal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        hi / lo
    }

    pub(crate) fn assemble(
        position: Vec<f64>,
        normal: Vec<f64>,
        metric: Mat<f64>,
        second_form: Mat<f64>,
        principal: Vec<f64>,
        base: &[f64],
        area_weight: f64,
    ) -> Result<Self> {
        let ginv = metric.inverse()?;
        let weingarten = second_form.mul(&ginv);
        let a_squared = second_form.mul(&ginv).mul(&second_form);
        let rel: Vec<f64> = position.iter().zip(base).map(|(x, b)| x - b).collect();
        let support: f64 = rel.iter().zip(&normal).map(|(a, b)| a * b).sum();
        let radial_tangent = rel.iter().zip(&normal).map(|(r, n)| r - support * n).collect();
        let mean = principal.iter().sum();
        let norm_sq = principal.iter().map(|v| v * v).sum();
        Ok(Self {
            position,
            normal,
            metric,
            second_form,
            weingarten,
            principal,
            mean,
            norm_sq,
            a_squared,
            support,
            radial_tangent,
            area_weight,
        })
    }
}

/// Geometry of every sample of a hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeData {
    pub dim: usize,
    pub points: Vec<PointGeometry>,
}

impl ShapeData {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest pointwise pinching ratio `λ_max/λ_min`.
    pub fn r_max(&self) -> f64 {
        self.points.iter().map(PointGeometry::pinching).fold(1.0, f64::max)
    }

    /// Total length (n = 1) or area (n = 2) from the sample weights.
    pub fn measure(&self) -> f64 {
        self.points.iter().map(|p| p.area_weight).sum()
    }
}
