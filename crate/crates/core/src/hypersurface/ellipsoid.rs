use super::PointGeometry;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat};

/// Smallest admissible distance of the latitude parameter from `±π/2`.
pub const POLE_EXCLUSION: f64 = 1e-3;

/// Position and its first and second parameter derivatives.
pub(crate) struct Frame {
    pub x: Vec<f64>,
    pub dx: Vec<Vec<f64>>,
    pub ddx: Vec<Vec<Vec<f64>>>,
    pub normal: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Analytic frame at parameters `(u)` for an ellipse or `(u, v)` for an ellipsoid.
/// No pole check: callers evaluating stencil neighbours stay inside the band.
pub(crate) fn frame(axes: &[f64], param: &[f64]) -> Frame {
    let (su, cu) = param[0].sin_cos();
    let (x, dx, ddx) = if axes.len() == 2 {
        let (a, b) = (axes[0], axes[1]);
        (
            vec![a * cu, b * su],
            vec![vec![-a * su, b * cu]],
            vec![vec![vec![-a * cu, -b * su]]],
        )
    } else {
        let (a, b, c) = (axes[0], axes[1], axes[2]);
        let (sv, cv) = param[1].sin_cos();
        let x = vec![a * cu * cv, b * su * cv, c * sv];
        let xu = vec![-a * su * cv, b * cu * cv, 0.0];
        let xv = vec![-a * cu * sv, -b * su * sv, c * cv];
        let xuu = vec![-a * cu * cv, -b * su * cv, 0.0];
        let xuv = vec![a * su * sv, -b * cu * sv, 0.0];
        let xvv = vec![-a * cu * cv, -b * su * cv, -c * sv];
        (x, vec![xu, xv], vec![vec![xuu, xuv.clone()], vec![xuv, xvv]])
    };
    let grad: Vec<f64> = x.iter().zip(axes).map(|(xi, a)| -xi / (a * a)).collect();
    let norm = dot(&grad, &grad).sqrt();
    let normal = grad.iter().map(|g| g / norm).collect();
    Frame { x, dx, ddx, normal }
}

impl Frame {
    pub fn metric(&self) -> Mat<f64> {
        let n = self.dx.len();
        Mat::from_fn(n, |i, j| dot(&self.dx[i], &self.dx[j]))
    }

    pub fn second_form(&self) -> Mat<f64> {
        let n = self.dx.len();
        Mat::from_fn(n, |i, j| dot(&self.ddx[i][j], &self.normal))
    }

    pub fn support(&self, base: &[f64]) -> f64 {
        self.x
            .iter()
            .zip(base)
            .zip(&self.normal)
            .map(|((x, b), n)| (x - b) * n)
            .sum()
    }
}

/// Principal curvatures as roots of `det(h - λg) = 0`, ascending.
pub fn principal_closed_form(g: &Mat<f64>, h: &Mat<f64>) -> Vec<f64> {
    if g.dim() == 1 {
        return vec![h.get(0, 0) / g.get(0, 0)];
    }
    let a = g.determinant();
    let b = g.get(0, 0) * h.get(1, 1) + g.get(1, 1) * h.get(0, 0) - 2.0 * g.get(0, 1) * h.get(0, 1);
    let c = h.determinant();
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let q = 0.5 * (b + b.signum() * disc);
    let (r1, r2) = (q / a, c / q);
    vec![r1.min(r2), r1.max(r2)]
}

/// Principal curvatures from `L⁻¹ h L⁻ᵀ` with `g = L Lᵀ`.
fn principal_symmetric(g: &Mat<f64>, h: &Mat<f64>) -> Result<Vec<f64>> {
    let n = g.dim();
    if n == 1 {
        return Ok(vec![h.get(0, 0) / g.get(0, 0)]);
    }
    let l11 = g.get(0, 0).sqrt();
    let l21 = g.get(1, 0) / l11;
    let l22 = (g.get(1, 1) - l21 * l21).sqrt();
    let linv = Mat::from_rows(&[&[1.0 / l11, 0.0], &[-l21 / (l11 * l22), 1.0 / l22]])?;
    let s = h.congruence(&linv);
    Ok(sym_eigen(&s.add(&s.transpose()).scale(0.5))?.values)
}

/// Exact geometry of the ellipse/ellipsoid with the given semi-axes at `(u)` or `(u, v)`.
/// The area weight is the density `√det g` of the parametrization.
pub fn ellipsoid_geometry(axes: &[f64], param: &[f64], base: &[f64]) -> Result<PointGeometry> {
    if !(2..=3).contains(&axes.len()) || param.len() != axes.len() - 1 {
        return Err(Error::Dimension {
            expected: axes.len().saturating_sub(1),
            got: param.len(),
        });
    }
    if axes.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::Invalid("semi-axes must be positive".into()));
    }
    if param.len() == 2 && param[1].abs() > std::f64::consts::FRAC_PI_2 - POLE_EXCLUSION {
        return Err(Error::Domain {
            function: "ellipsoid_geometry".into(),
            condition: format!("latitude {} is within {POLE_EXCLUSION} of a pole", param[1]),
        });
    }
    let f = frame(axes, param);
    let g = f.metric();
    let h = f.second_form();
    let principal = principal_symmetric(&g, &h)?;
    let density = g.determinant().sqrt();
    PointGeometry::assemble(f.x.clone(), f.normal.clone(), g, h, principal, base, density)
}

pub(crate) fn point_with_weight(axes: &[f64], param: &[f64], base: &[f64], spacing: f64) -> Result<PointGeometry> {
    let mut p = ellipsoid_geometry(axes, param, base)?;
    p.area_weight *= spacing.powi(param.len() as i32);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_point() {
        let p = ellipsoid_geometry(&[2.0, 2.0, 2.0], &[0.7, -0.4], &[0.0; 3]).unwrap();
        for l in &p.principal {
            assert!((l - 0.5).abs() < 1e-14);
        }
        assert!((p.support + 2.0).abs() < 1e-14);
    }

    #[test]
    fn spheroid_equator_is_pinched() {
        let p = ellipsoid_geometry(&[1.0, 1.0, 1.5], &[0.0, 0.0], &[0.0; 3]).unwrap();
        assert!(p.principal.iter().all(|&l| l > 0.0));
        assert!((p.principal[0] - p.principal[1]).abs() > 0.1);
        assert!(p.pinching() > 1.0);
    }

    #[test]
    fn two_paths_agree() {
        for (u, v) in [(0.3, 0.2), (1.9, -1.1), (4.0, 1.3)] {
            let p = ellipsoid_geometry(&[1.0, 1.7, 0.6], &[u, v], &[0.1, 0.0, -0.2]).unwrap();
            let q = principal_closed_form(&p.metric, &p.second_form);
            for (a, b) in p.principal.iter().zip(&q) {
                assert!((a - b).abs() < 1e-12);
            }
            let trace = p.weingarten.trace();
            let gh = p.metric.inverse().unwrap().inner(&p.second_form);
            assert!((trace - gh).abs() < 1e-12);
            assert!((trace - p.mean).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_curvature() {
        let p = ellipsoid_geometry(&[2.0, 1.0], &[0.0], &[0.0; 3]).unwrap();
        assert!((p.principal[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_pole() {
        assert!(ellipsoid_geometry(&[1.0; 3], &[0.0, 1.5705], &[0.0; 3]).is_err());
    }
}
