use super::stencil::{d1, d1_forward, d2};
use super::{GeometryOptions, PointGeometry, RevolutionProfile, ShapeData};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Profile jet at a (possibly reflected) sample index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ProfileJet {
    pub p: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

impl ProfileJet {
    pub fn speed(&self) -> f64 {
        self.d1[0].hypot(self.d1[1])
    }

    /// Inward unit normal in the meridian plane.
    pub fn normal(&self) -> [f64; 2] {
        let s = self.speed();
        [-self.d1[1] / s, self.d1[0] / s]
    }

    /// `⟨P'', N⟩`, the meridian entry of the second fundamental form.
    pub fn h_meridian(&self) -> f64 {
        let n = self.normal();
        self.d2[0] * n[0] + self.d2[1] * n[1]
    }

    /// `-y N_y`, the parallel entry of the second fundamental form.
    pub fn h_parallel(&self) -> f64 {
        -self.p[1] * self.normal()[1]
    }
}

pub(crate) fn profile_jet(profile: &RevolutionProfile, j: isize) -> ProfileJet {
    let h = profile.spacing();
    let at = |k: usize| move |o: isize| profile.ghost(j + o)[k];
    ProfileJet {
        p: profile.ghost(j),
        d1: [d1(at(0), h), d1(at(1), h)],
        d2: [d2(at(0), h), d2(at(1), h)],
    }
}

fn pole_angle(profile: &RevolutionProfile, end: usize) -> f64 {
    let pts = profile.points();
    let m = profile.intervals();
    let h = profile.spacing();
    let pick = |k: usize| if end == 0 { pts[k][0] } else { pts[m - k][0] };
    let dx = d1_forward([0, 1, 2, 3, 4].map(pick), h);
    let dy = profile_jet(profile, end as isize).d1[1];
    (dx / dx.hypot(dy)).abs()
}

/// Extracts principal curvatures and support data along the profile of a
/// surface of revolution about the x-axis. Sample `j` stands for the parallel
/// circle through `(x_j, y_j, 0)`.
pub fn revolution_geometry(profile: &RevolutionProfile, opts: &GeometryOptions) -> Result<ShapeData> {
    let base = &opts.base_point;
    if base[1] != 0.0 || base[2] != 0.0 {
        return Err(Error::Invalid(format!(
            "base point {base:?} must lie on the axis of revolution"
        )));
    }
    let m = profile.intervals();
    for end in [0, m] {
        let angle = pole_angle(profile, end);
        if angle > opts.pole_tol {
            return Err(Error::Profile(format!(
                "profile meets the axis at sample {end} with angle defect {angle:.3e}"
            )));
        }
    }
    let h = profile.spacing();
    let mut points = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let jet = profile_jet(profile, j as isize);
        let speed = jet.speed();
        if !(speed > 0.0) {
            return Err(Error::Degenerate(format!("zero profile tangent at sample {j}")));
        }
        let e = speed * speed;
        let hm = jet.h_meridian();
        let k = hm / e;
        if !(k > 0.0) {
            return Err(Error::NotConvex { index: j, curvature: k });
        }
        let pole = j == 0 || j == m;
        let (metric, second, lp) = if pole {
            (Mat::from_diag(&[e, e]), Mat::from_diag(&[hm, hm]), k)
        } else {
            let y = jet.p[1];
            let hp = jet.h_parallel();
            (Mat::from_diag(&[e, y * y]), Mat::from_diag(&[hm, hp]), hp / (y * y))
        };
        if !(lp > 0.0) {
            return Err(Error::NotConvex { index: j, curvature: lp });
        }
        let n = jet.normal();
        points.push(PointGeometry::assemble(
            vec![jet.p[0], jet.p[1], 0.0],
            vec![n[0], n[1], 0.0],
            metric,
            second,
            vec![k, lp],
            base,
            std::f64::consts::TAU * jet.p[1] * speed * h,
        )?);
    }
    Ok(ShapeData { dim: 2, points })
}

#[cfg(test)]
mod tests {
    use super::super::{ellipsoid_geometry, DiscreteHypersurface};
    use super::*;

    #[test]
    fn sphere_is_umbilic() {
        let s = DiscreteHypersurface::sphere(2.0, 256).unwrap();
        let data = s.geometry(&GeometryOptions::default()).unwrap();
        for p in &data.points {
            assert!((p.principal[0] - 0.5).abs() < 1e-6);
            assert!((p.principal[1] - 0.5).abs() < 1e-6);
            assert!((p.support + 2.0).abs() < 1e-10);
        }
        // Trapezoidal weights: second order in the profile spacing.
        let area = 16.0 * std::f64::consts::PI;
        assert!((data.measure() - area).abs() < 1e-4 * area);
    }

    #[test]
    fn unit_sphere_quantities() {
        let s = DiscreteHypersurface::sphere(1.0, 128).unwrap();
        let data = s.geometry(&GeometryOptions::default()).unwrap();
        for p in &data.points {
            assert!((p.mean - 2.0).abs() < 1e-6);
            assert!((p.norm_sq - 2.0).abs() < 1e-6);
            assert!((2.0 * p.norm_sq - p.mean * p.mean).abs() < 1e-10);
        }
    }

    #[test]
    fn oblate_spheroid_matches_closed_form() {
        let s = DiscreteHypersurface::spheroid(1.0, 2.0, 256).unwrap();
        let data = s.geometry(&GeometryOptions::default()).unwrap();
        let eq = &data.points[128];
        assert!((eq.principal[0] - 2.0).abs() < 1e-6);
        assert!((eq.principal[1] - 0.5).abs() < 1e-6);
        // Same spheroid with its axis along z, sampled away from the equator.
        for j in [40usize, 70, 100] {
            let sj = std::f64::consts::PI * j as f64 / 256.0;
            let v = std::f64::consts::FRAC_PI_2 - sj;
            let exact = ellipsoid_geometry(&[2.0, 2.0, 1.0], &[0.3, v], &[0.0; 3]).unwrap();
            let p = &data.points[j];
            let mut a = exact.principal.clone();
            let mut b = p.principal.clone();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-6, "{a:?} vs {b:?}");
            }
            assert!((exact.support - p.support).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_off_axis_base_point() {
        let s = DiscreteHypersurface::sphere(1.0, 64).unwrap();
        let opts = GeometryOptions::with_base_point([0.0, 0.1, 0.0]);
        assert!(matches!(s.geometry(&opts), Err(Error::Invalid(_))));
    }

    #[test]
    fn rejects_interior_axis_contact() {
        let r = RevolutionProfile::from_fn(64, |s| [s.cos(), s.sin() * (s - std::f64::consts::FRAC_PI_2).abs()]);
        assert!(matches!(r, Err(Error::Profile(_))));
    }

    #[test]
    fn rejects_oblique_pole() {
        let r = RevolutionProfile::from_fn(128, |s| [s.cos() + 0.2 * s, s.sin()]).unwrap();
        assert!(matches!(
            revolution_geometry(&r, &GeometryOptions::default()),
            Err(Error::Profile(_))
        ));
    }

    #[test]
    fn orientation_is_normalized() {
        let r = RevolutionProfile::from_fn(64, |s| [-s.cos(), s.sin()]).unwrap();
        assert!(r.points()[0][0] > r.points()[64][0]);
        let data = revolution_geometry(&r, &GeometryOptions::default()).unwrap();
        assert!(data.points.iter().all(|p| p.principal.iter().all(|&l| l > 0.0)));
    }
}
