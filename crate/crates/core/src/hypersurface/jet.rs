//! Covariant derivatives on the parameter grid: Christoffel symbols from the
//! sampled metric, covariant Hessians of scalar fields, and the residuals of
//! the Codazzi equation and of the Hessian identity for the support function.

use std::f64::consts::{FRAC_PI_2, PI};

use super::curve::{derivatives, orientation};
use super::ellipsoid::frame;
use super::revolution::profile_jet;
use super::stencil::{d1, d11, d2, wrap, OFFSETS};
use super::{DiscreteHypersurface, GeometryOptions, POLE_MARGIN};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// A scalar field on a hypersurface.
pub enum ScalarField<'a> {
    /// One value per sample, in the order of [`DiscreteHypersurface::geometry`].
    /// Revolution surfaces take one value per profile sample (rotationally symmetric fields).
    Samples(&'a [f64]),
    /// A function of ambient position.
    Ambient(&'a dyn Fn(&[f64]) -> f64),
}

/// A symmetric 2-tensor in sampling coordinates at sample `index`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorSample {
    pub index: usize,
    pub tensor: Mat<f64>,
}

struct Local {
    g: Mat<f64>,
    h: Mat<f64>,
    z: f64,
    x: Vec<f64>,
    dx: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Grid<'s> {
    surface: &'s DiscreteHypersurface,
    base: [f64; 3],
    n: usize,
    spacing: [f64; 2],
}

impl<'s> Grid<'s> {
    fn new(surface: &'s DiscreteHypersurface, base: [f64; 3]) -> Self {
        let spacing = match surface {
            DiscreteHypersurface::Curve(c) => [c.spacing(); 2],
            DiscreteHypersurface::Revolution(p) => [p.spacing(); 2],
            DiscreteHypersurface::Ellipsoid(e) => [e.spacing(); 2],
        };
        Self {
            surface,
            base,
            n: surface.dim(),
            spacing,
        }
    }

    /// Sample indices away from coordinate poles.
    fn band(&self) -> Vec<usize> {
        match self.surface {
            DiscreteHypersurface::Curve(c) => (0..c.len()).collect(),
            DiscreteHypersurface::Revolution(p) => {
                let h = p.spacing();
                (0..=p.intervals())
                    .filter(|&j| {
                        let s = j as f64 * h;
                        (POLE_MARGIN..=PI - POLE_MARGIN).contains(&s)
                    })
                    .collect()
            }
            DiscreteHypersurface::Ellipsoid(e) => {
                (0..e.len())
                    .filter(|&k| self.n == 1 || e.parameter(k)[1].abs() <= FRAC_PI_2 - POLE_MARGIN)
                    .collect()
            }
        }
    }

    fn local(&self, index: usize, a: isize, b: isize) -> Local {
        match self.surface {
            DiscreteHypersurface::Curve(c) => {
                let i = wrap(index as isize + a, c.len());
                let (p1, p2) = derivatives(c, i);
                let sigma = orientation(c.points());
                let speed = p1[0].hypot(p1[1]);
                let nrm = [-sigma * p1[1] / speed, sigma * p1[0] / speed];
                let x = c.points()[i].to_vec();
                let z = (x[0] - self.base[0]) * nrm[0] + (x[1] - self.base[1]) * nrm[1];
                Local {
                    g: Mat::from_diag(&[speed * speed]),
                    h: Mat::from_diag(&[dot(&p2, &nrm)]),
                    z,
                    x,
                    dx: vec![p1.to_vec()],
                }
            }
            DiscreteHypersurface::Revolution(p) => {
                let jet = profile_jet(p, index as isize + a);
                let nrm = jet.normal();
                let [x, y] = jet.p;
                let z = (x - self.base[0]) * nrm[0] + y * nrm[1];
                Local {
                    g: Mat::from_diag(&[jet.speed().powi(2), y * y]),
                    h: Mat::from_diag(&[jet.h_meridian(), jet.h_parallel()]),
                    z,
                    x: vec![x, y, 0.0],
                    dx: vec![vec![jet.d1[0], jet.d1[1], 0.0], vec![0.0, 0.0, y]],
                }
            }
            DiscreteHypersurface::Ellipsoid(e) => {
                let f = frame(e.axes(), &self.param(index, a, b));
                Local {
                    g: f.metric(),
                    h: f.second_form(),
                    z: f.support(&self.base),
                    dx: f.dx.clone(),
                    x: f.x,
                }
            }
        }
    }

    fn param(&self, index: usize, a: isize, b: isize) -> Vec<f64> {
        let DiscreteHypersurface::Ellipsoid(e) = self.surface else {
            unreachable!("parameters are only used for analytic surfaces")
        };
        let uv = e.parameter(index);
        let h = e.spacing();
        if self.n == 1 {
            vec![uv[0] + a as f64 * h]
        } else {
            vec![uv[0] + a as f64 * h, uv[1] + b as f64 * h]
        }
    }

    fn field(&self, field: &ScalarField, index: usize, a: isize, b: isize) -> Result<f64> {
        match field {
            ScalarField::Ambient(f) => Ok(f(&self.position(index, a, b))),
            ScalarField::Samples(v) => {
                let k = self.sample_index(index, a, b);
                v.get(k).copied().ok_or(Error::Dimension {
                    expected: self.surface_len(),
                    got: v.len(),
                })
            }
        }
    }

    fn surface_len(&self) -> usize {
        match self.surface {
            DiscreteHypersurface::Curve(c) => c.len(),
            DiscreteHypersurface::Revolution(p) => p.intervals() + 1,
            DiscreteHypersurface::Ellipsoid(e) => e.len(),
        }
    }

    fn sample_index(&self, index: usize, a: isize, b: isize) -> usize {
        match self.surface {
            DiscreteHypersurface::Curve(c) => wrap(index as isize + a, c.len()),
            DiscreteHypersurface::Revolution(p) => {
                let m = p.intervals() as isize;
                let j = index as isize + a;
                (if j < 0 {
                    -j
                } else if j > m {
                    2 * m - j
                } else {
                    j
                }) as usize
            }
            DiscreteHypersurface::Ellipsoid(e) => {
                let m = e.grid();
                if self.n == 1 {
                    return wrap(index as isize + a, m);
                }
                let rows = (m / 2) as isize;
                let (i0, j0) = ((index % m) as isize, (index / m) as isize);
                let (mut i, mut j) = (i0 + a, j0 + b);
                if j < 0 {
                    j = -1 - j;
                    i += rows;
                } else if j >= rows {
                    j = 2 * rows - 1 - j;
                    i += rows;
                }
                j as usize * m + wrap(i, m)
            }
        }
    }

    fn position(&self, index: usize, a: isize, b: isize) -> Vec<f64> {
        match self.surface {
            DiscreteHypersurface::Curve(c) => c.points()[wrap(index as isize + a, c.len())].to_vec(),
            DiscreteHypersurface::Revolution(p) => {
                let q = p.ghost(index as isize + a);
                let (sf, cf) = (b as f64 * p.spacing()).sin_cos();
                vec![q[0], q[1] * cf, q[1] * sf]
            }
            DiscreteHypersurface::Ellipsoid(e) => frame(e.axes(), &self.param(index, a, b)).x,
        }
    }

    /// First and second partial derivatives of a scalar sampled by `get(a, b)`.
    fn partials(&self, get: impl Fn(isize, isize) -> Result<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
        let n = self.n;
        let [hu, hv] = self.spacing;
        let mut cross = [[0.0; 5]; 2];
        for (k, &o) in OFFSETS.iter().enumerate() {
            cross[0][k] = get(o, 0)?;
            if n == 2 {
                cross[1][k] = get(0, o)?;
            }
        }
        let line = |dir: usize| move |o: isize| cross[dir][(o + 2) as usize];
        let mut grad = vec![d1(line(0), hu)];
        let mut hess = Mat::zeros(n);
        hess.set(0, 0, d2(line(0), hu));
        if n == 2 {
            grad.push(d1(line(1), hv));
            hess.set(1, 1, d2(line(1), hv));
            let mut block = [[0.0; 5]; 5];
            for (ia, &a) in OFFSETS.iter().enumerate() {
                for (ib, &b) in OFFSETS.iter().enumerate() {
                    if a != 0 && b != 0 {
                        block[ia][ib] = get(a, b)?;
                    }
                }
            }
            let mixed = d11(|a, b| block[(a + 2) as usize][(b + 2) as usize], hu, hv);
            hess.set(0, 1, mixed);
            hess.set(1, 0, mixed);
        }
        Ok((grad, hess))
    }

    /// Geometry jet at a band sample.
    fn jet(&self, index: usize) -> Result<Jet> {
        let n = self.n;
        let mut along: Vec<Vec<Local>> = Vec::with_capacity(n);
        for dir in 0..n {
            along.push(
                OFFSETS
                    .iter()
                    .map(|&o| if dir == 0 { self.local(index, o, 0) } else { self.local(index, 0, o) })
                    .collect(),
            );
        }
        let center = self.local(index, 0, 0);
        let h = self.spacing;
        let deriv = |dir: usize, pick: &dyn Fn(&Local) -> f64| {
            d1(|o| pick(&along[dir][(o + 2) as usize]), h[dir])
        };
        let mut dg = Vec::with_capacity(n);
        let mut dh = Vec::with_capacity(n);
        for dir in 0..n {
            dg.push(Mat::from_fn(n, |i, j| deriv(dir, &|l: &Local| l.g.get(i, j))));
            dh.push(Mat::from_fn(n, |i, j| deriv(dir, &|l: &Local| l.h.get(i, j))));
        }
        let ginv = center.g.inverse()?;
        let gamma = christoffel(&ginv, &dg);
        let rel: Vec<f64> = center.x.iter().zip(&self.base).map(|(x, b)| x - b).collect();
        let pos_dot: Vec<f64> = center.dx.iter().map(|t| dot(&rel, t)).collect();
        Ok(Jet {
            g: center.g,
            ginv,
            h: center.h,
            z: center.z,
            dh,
            gamma,
            pos_dot,
        })
    }
}

struct Jet {
    g: Mat<f64>,
    ginv: Mat<f64>,
    h: Mat<f64>,
    z: f64,
    dh: Vec<Mat<f64>>,
    /// `gamma[k][i][j] = Γ^k_ij`.
    gamma: Vec<Vec<Vec<f64>>>,
    pos_dot: Vec<f64>,
}

impl Jet {
    fn dim(&self) -> usize {
        self.g.dim()
    }

    /// `∇_k h_ij`.
    fn nabla_h(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim();
        let mut v = self.dh[k].get(i, j);
        for p in 0..n {
            v -= self.gamma[p][k][i] * self.h.get(p, j) + self.gamma[p][k][j] * self.h.get(i, p);
        }
        v
    }

    fn covariant_hessian(&self, grad: &[f64], hess: &Mat<f64>) -> Mat<f64> {
        let n = self.dim();
        Mat::from_fn(n, |i, j| {
            hess.get(i, j) - (0..n).map(|k| self.gamma[k][i][j] * grad[k]).sum::<f64>()
        })
    }
}

fn christoffel(ginv: &Mat<f64>, dg: &[Mat<f64>]) -> Vec<Vec<Vec<f64>>> {
    let n = ginv.dim();
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for (i, gki) in gk.iter_mut().enumerate() {
            for (j, v) in gki.iter_mut().enumerate() {
                *v = 0.5
                    * (0..n)
                        .map(|l| {
                            ginv.get(k, l) * (dg[i].get(l, j) + dg[j].get(l, i) - dg[l].get(i, j))
                        })
                        .sum::<f64>();
            }
        }
    }
    gamma
}

/// `∇_i∇_j φ = ∂_i∂_j φ - Γ^k_ij ∂_k φ` at every sample away from coordinate poles.
pub fn covariant_hessian(surface: &DiscreteHypersurface, field: &ScalarField) -> Result<Vec<TensorSample>> {
    let grid = Grid::new(surface, [0.0; 3]);
    if let ScalarField::Samples(v) = field {
        if v.len() != grid.surface_len() {
            return Err(Error::Dimension {
                expected: grid.surface_len(),
                got: v.len(),
            });
        }
    }
    grid.band()
        .into_iter()
        .map(|index| {
            let jet = grid.jet(index)?;
            let (grad, hess) = grid.partials(|a, b| grid.field(field, index, a, b))?;
            Ok(TensorSample {
                index,
                tensor: jet.covariant_hessian(&grad, &hess),
            })
        })
        .collect()
}

/// `max |∇_k h_ij - ∇_j h_ik|` over samples away from the poles; zero for curves.
pub fn codazzi_residual(surface: &DiscreteHypersurface) -> Result<f64> {
    let grid = Grid::new(surface, [0.0; 3]);
    if grid.n == 1 {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for index in grid.band() {
        let jet = grid.jet(index)?;
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max((jet.nabla_h(k, i, j) - jet.nabla_h(j, i, k)).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Max-norm defect of `∇²Z = -h - ⟨X^⊤, ∇h⟩ - Z·A²` in flat space with the base point
/// at the origin, over samples away from the poles.
pub fn lemma31_residual(surface: &DiscreteHypersurface, c: f64) -> Result<f64> {
    if c != 0.0 {
        return Err(Error::Invalid(format!(
            "support-function Hessian residual is implemented for c = 0 only (got {c})"
        )));
    }
    let shape = surface.geometry(&GeometryOptions::default())?;
    if let Some(i) = shape.points.iter().position(|p| !(p.support < 0.0)) {
        return Err(Error::Domain {
            function: "lemma31_residual".into(),
            condition: format!("origin must lie strictly inside the surface (Z >= 0 at sample {i})"),
        });
    }
    let grid = Grid::new(surface, [0.0; 3]);
    let n = grid.n;
    let mut worst = 0.0f64;
    for index in grid.band() {
        let jet = grid.jet(index)?;
        let (grad, hess) = grid.partials(|a, b| Ok(grid.local(index, a, b).z))?;
        let lhs = jet.covariant_hessian(&grad, &hess);
        let t: Vec<f64> = (0..n)
            .map(|l| (0..n).map(|k| jet.ginv.get(l, k) * jet.pos_dot[k]).sum())
            .collect();
        let a2 = jet.h.mul(&jet.ginv).mul(&jet.h);
        for i in 0..n {
            for j in 0..n {
                let transport: f64 = (0..n).map(|l| t[l] * jet.nabla_h(l, i, j)).sum();
                let rhs = -jet.h.get(i, j) - transport - jet.z * a2.get(i, j);
                worst = worst.max((lhs.get(i, j) - rhs).abs());
            }
        }
    }
    Ok(worst)
}
