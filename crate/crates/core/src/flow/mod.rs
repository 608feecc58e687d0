//! Explicit integrator for `∂X/∂t = F ν` on convex curves and surfaces of
//! revolution in Euclidean space.
//!
//! The time step is `dt = dt_safety · (2/ρ) · h² / max Σḟᵢ`, where `h` is the
//! smallest chord between neighbouring samples and `ρ` the spectral radius of
//! the second-derivative stencil (`1088/180` for the sixth-order curve stencil,
//! `64/12` for the fourth-order profile stencil). With `dt_safety ≤ 1` this is
//! the explicit-Euler stability limit of the linearized flow.

mod monitors;
pub mod redistribute;

pub use monitors::{centroid, monitors, monitors_from, pinching_ratio, Monitors};

use serde::{Deserialize, Serialize};

use crate::curvfun::CurvatureFunction;
use crate::error::{Error, Result};
use crate::hypersurface::{ClosedCurve, DiscreteHypersurface, GeometryOptions, RevolutionProfile, ShapeData};

/// Column order of [`TraceRow`] when written as CSV.
pub const TRACE_HEADER: &str = "t,dt,scale,r_max,F_aniso_max,aHH_max,umb_max,tau_fit,rel_residual,measure";

/// Maximum number of successive step halvings before a run is aborted.
pub const MAX_HALVINGS: usize = 20;
/// Smallest admissible time step.
pub const DT_MIN: f64 = 1e-14;

const CURVE_STENCIL_RADIUS: f64 = 1088.0 / 180.0;
const PROFILE_STENCIL_RADIUS: f64 = 64.0 / 12.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RescaleMode {
    #[default]
    None,
    /// Rescale about the centroid after every step so that length (curves) or
    /// area (surfaces) keeps its initial value.
    FixedScale,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig {
    pub f: CurvatureFunction<f64>,
    pub dt_safety: f64,
    pub rescale: RescaleMode,
    pub t_max: f64,
    /// Stop once `r_max − 1 < r_tol`.
    pub r_tol: f64,
    /// Stop once the largest principal curvature exceeds this value.
    pub curvature_cap: f64,
    /// Stop once the unscaled length/area falls below this fraction of its initial value.
    pub min_scale_fraction: f64,
    /// Record a trace row every this many accepted steps.
    pub record_every: usize,
    pub max_steps: usize,
    /// Ambient curvature; flows are implemented for `c = 0` only.
    pub c: f64,
}

impl FlowConfig {
    pub fn new(f: CurvatureFunction<f64>) -> Self {
        Self {
            f,
            dt_safety: 0.4,
            rescale: RescaleMode::None,
            t_max: 1.0,
            r_tol: 0.0,
            curvature_cap: 1e6,
            min_scale_fraction: 1e-3,
            record_every: 100,
            max_steps: 10_000_000,
            c: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return bad(format!("dt_safety {} must lie in (0, 1]", self.dt_safety));
        }
        if self.c != 0.0 {
            return bad(format!("flows require c = 0 (got {})", self.c));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad(format!("t_max {} must be positive and finite", self.t_max));
        }
        if !(self.r_tol >= 0.0) {
            return bad(format!("r_tol {} must be nonnegative", self.r_tol));
        }
        if !(self.curvature_cap > 0.0) {
            return bad(format!("curvature_cap {} must be positive", self.curvature_cap));
        }
        if !(self.min_scale_fraction >= 0.0 && self.min_scale_fraction < 1.0) {
            return bad(format!("min_scale_fraction {} must lie in [0, 1)", self.min_scale_fraction));
        }
        if self.record_every == 0 || self.max_steps == 0 {
            return bad("record_every and max_steps must be positive".into());
        }
        if !self.f.is_elliptic() {
            return bad(format!("{} is not elliptic", self.f));
        }
        Ok(())
    }
}

/// One recorded state of a flow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub dt: f64,
    /// Rescaling factor applied in the step that produced this row.
    pub scale: f64,
    pub r_max: f64,
    #[serde(rename = "F_aniso_max")]
    pub f_aniso_max: f64,
    #[serde(rename = "aHH_max")]
    pub ahh_max: f64,
    pub umb_max: f64,
    pub tau_fit: f64,
    pub rel_residual: f64,
    pub measure: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    TimeLimit,
    Rounded,
    CurvatureCap,
    ScaleFloor,
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Stopped(StopReason),
    Aborted(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrace {
    pub rows: Vec<TraceRow>,
    pub outcome: Outcome,
    pub steps: usize,
    /// Unscaled length/area relative to the initial surface.
    pub unscaled_fraction: f64,
    /// Last accepted surface.
    pub surface: DiscreteHypersurface,
}

impl FlowTrace {
    pub fn is_aborted(&self) -> bool {
        matches!(self.outcome, Outcome::Aborted(_))
    }

    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("a trace always holds the initial row")
    }
}

fn check_flowable(surface: &DiscreteHypersurface, f: &CurvatureFunction<f64>) -> Result<()> {
    if let DiscreteHypersurface::Ellipsoid(_) = surface {
        return Err(Error::Invalid(
            "flows run on curves and surfaces of revolution only".into(),
        ));
    }
    if surface.dim() != f.dim() {
        return Err(Error::Dimension {
            expected: surface.dim(),
            got: f.dim(),
        });
    }
    Ok(())
}

fn move_points(surface: &DiscreteHypersurface, shape: &ShapeData, f: &CurvatureFunction<f64>, dt: f64) -> Result<Vec<[f64; 2]>> {
    let pts: &[[f64; 2]] = match surface {
        DiscreteHypersurface::Curve(c) => c.points(),
        DiscreteHypersurface::Revolution(p) => p.points(),
        DiscreteHypersurface::Ellipsoid(_) => unreachable!("checked by check_flowable"),
    };
    pts.iter()
        .zip(&shape.points)
        .map(|(x, g)| {
            let speed = f.eval_slice(&g.principal)?;
            Ok([x[0] + dt * speed * g.normal[0], x[1] + dt * speed * g.normal[1]])
        })
        .collect()
}

fn rebuild(surface: &DiscreteHypersurface, pts: Vec<[f64; 2]>) -> Result<DiscreteHypersurface> {
    Ok(match surface {
        DiscreteHypersurface::Curve(_) => DiscreteHypersurface::Curve(ClosedCurve::new(pts)?),
        _ => DiscreteHypersurface::Revolution(RevolutionProfile::new(pts)?),
    })
}

fn points_of(surface: &DiscreteHypersurface) -> Vec<[f64; 2]> {
    match surface {
        DiscreteHypersurface::Curve(c) => c.points().to_vec(),
        DiscreteHypersurface::Revolution(p) => p.points().to_vec(),
        DiscreteHypersurface::Ellipsoid(_) => Vec::new(),
    }
}

/// One explicit Euler step `X ← X + dt·F·ν`. The result is validated: a step
/// that destroys convexity or simplicity returns an error.
pub fn step(surface: &DiscreteHypersurface, f: &CurvatureFunction<f64>, dt: f64) -> Result<DiscreteHypersurface> {
    check_flowable(surface, f)?;
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step {dt} must be positive")));
    }
    let opts = GeometryOptions::default();
    let shape = surface.geometry(&opts)?;
    let next = rebuild(surface, move_points(surface, &shape, f, dt)?)?;
    next.geometry(&opts)?;
    Ok(next)
}

/// Stable explicit time step for the current geometry.
pub fn stable_dt(surface: &DiscreteHypersurface, shape: &ShapeData, f: &CurvatureFunction<f64>, dt_safety: f64) -> Result<f64> {
    let pts = points_of(surface);
    let (h, radius) = match surface {
        DiscreteHypersurface::Curve(_) => {
            let m = pts.len();
            let h = (0..m)
                .map(|i| chord(pts[i], pts[(i + 1) % m]))
                .fold(f64::INFINITY, f64::min);
            (h, CURVE_STENCIL_RADIUS)
        }
        _ => {
            let h = pts.windows(2).map(|w| chord(w[0], w[1])).fold(f64::INFINITY, f64::min);
            (h, PROFILE_STENCIL_RADIUS)
        }
    };
    let mut fdot = 0.0f64;
    for p in &shape.points {
        fdot = fdot.max(f.grad_slice(&p.principal)?.iter().sum());
    }
    if !(fdot > 0.0) {
        return Err(Error::Degenerate("Σḟ vanishes; the flow is not parabolic".into()));
    }
    Ok(dt_safety * 2.0 / radius * h * h / fdot)
}

fn chord(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn redistribute_surface(surface: &DiscreteHypersurface) -> Result<DiscreteHypersurface> {
    let pts = points_of(surface);
    let out = match surface {
        DiscreteHypersurface::Curve(_) => redistribute::closed_curve(&pts),
        _ => redistribute::profile(&pts),
    };
    rebuild(surface, out)
}

fn rescale(surface: &DiscreteHypersurface, center: [f64; 3], factor: f64) -> Result<DiscreteHypersurface> {
    let c = match surface {
        DiscreteHypersurface::Revolution(_) => [center[0], 0.0],
        _ => [center[0], center[1]],
    };
    let pts = points_of(surface)
        .into_iter()
        .map(|p| [c[0] + factor * (p[0] - c[0]), c[1] + factor * (p[1] - c[1])])
        .collect();
    rebuild(surface, pts)
}

fn row(t: f64, dt: f64, scale: f64, surface: &DiscreteHypersurface, f: &CurvatureFunction<f64>) -> Result<TraceRow> {
    let m = monitors(surface, f)?;
    Ok(TraceRow {
        t,
        dt,
        scale,
        r_max: m.r_max,
        f_aniso_max: m.f_aniso_max,
        ahh_max: m.ahh_max,
        umb_max: m.umb_max,
        tau_fit: m.soliton.tau_fit,
        rel_residual: m.soliton.relative_residual,
        measure: m.measure,
    })
}

/// Integrates the flow from `initial` until a stop criterion holds.
///
/// Each accepted step moves the samples, redistributes them to uniform chord
/// arclength and, in [`RescaleMode::FixedScale`], rescales about the
/// centroid. A step whose result fails validation is retried with half the
/// time step, up to [`MAX_HALVINGS`] times; after that the run is aborted and
/// the partial trace returned.
pub fn run(config: &FlowConfig, initial: &DiscreteHypersurface) -> Result<FlowTrace> {
    config.validate()?;
    check_flowable(initial, &config.f)?;
    let f = &config.f;
    let opts = GeometryOptions::default();
    let n = initial.dim() as i32;
    let mut surface = initial.clone();
    let mut shape = surface.geometry(&opts)?;
    for p in &shape.points {
        f.eval_slice(&p.principal)?;
    }
    let initial_measure = shape.measure();
    let mut unscaled_fraction = 1.0;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut rows = vec![row(0.0, 0.0, 1.0, &surface, f)?];
    let mut last = (0.0, 1.0);

    let outcome = loop {
        let (_, kmax) = monitors::curvature_range(&shape);
        if t >= config.t_max {
            break Outcome::Stopped(StopReason::TimeLimit);
        }
        if pinching_ratio(&shape) - 1.0 < config.r_tol {
            break Outcome::Stopped(StopReason::Rounded);
        }
        if kmax > config.curvature_cap {
            break Outcome::Stopped(StopReason::CurvatureCap);
        }
        if unscaled_fraction < config.min_scale_fraction {
            break Outcome::Stopped(StopReason::ScaleFloor);
        }
        if steps >= config.max_steps {
            break Outcome::Stopped(StopReason::StepLimit);
        }

        let mut dt = stable_dt(&surface, &shape, f, config.dt_safety)?.min(config.t_max - t);
        let mut accepted = None;
        let mut failure = String::new();
        for _ in 0..=MAX_HALVINGS {
            if dt < DT_MIN {
                failure = format!("time step underflow ({dt:.3e}) at t = {t}");
                break;
            }
            let attempt = move_points(&surface, &shape, f, dt)
                .and_then(|pts| rebuild(&surface, pts))
                .and_then(|s| redistribute_surface(&s))
                .and_then(|s| s.geometry(&opts).map(|g| (s, g)));
            match attempt {
                Ok(ok) => {
                    accepted = Some(ok);
                    break;
                }
                Err(e) => {
                    failure = format!("step rejected at t = {t}: {e}");
                    dt *= 0.5;
                }
            }
        }
        let Some((mut next, mut next_shape)) = accepted else {
            break Outcome::Aborted(failure);
        };

        let measure = next_shape.measure();
        unscaled_fraction *= measure / shape.measure();
        let mut factor = 1.0;
        if config.rescale == RescaleMode::FixedScale {
            factor = (initial_measure / measure).powf(1.0 / n as f64);
            next = rescale(&next, centroid(&next_shape), factor)?;
            next_shape = next.geometry(&opts)?;
        }
        surface = next;
        shape = next_shape;
        t += dt;
        steps += 1;
        last = (dt, factor);
        if steps.is_multiple_of(config.record_every) {
            rows.push(row(t, dt, factor, &surface, f)?);
        }
    };
    if !steps.is_multiple_of(config.record_every) {
        rows.push(row(t, last.0, last.1, &surface, f)?);
    }
    Ok(FlowTrace {
        rows,
        outcome,
        steps,
        unscaled_fraction,
        surface,
    })
}
