use super::stencil::{d1_6, d2_6, wrap};
use super::{ClosedCurve, GeometryOptions, PointGeometry, ShapeData};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Tangent data of a periodic curve at sample `i`: `(P', P'')`.
pub(crate) fn derivatives(curve: &ClosedCurve, i: usize) -> ([f64; 2], [f64; 2]) {
    let pts = curve.points();
    let m = pts.len();
    let h = curve.spacing();
    let at = |k: usize| move |o: isize| pts[wrap(i as isize + o, m)][k];
    (
        [d1_6(at(0), h), d1_6(at(1), h)],
        [d2_6(at(0), h), d2_6(at(1), h)],
    )
}

/// `+1` for counter-clockwise curves, `-1` otherwise (shoelace formula).
pub(crate) fn orientation(points: &[[f64; 2]]) -> f64 {
    let m = points.len();
    let twice_area: f64 = (0..m)
        .map(|i| {
            let (p, q) = (points[i], points[(i + 1) % m]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    if twice_area >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Extracts curvature, inward normal and support data of a closed convex curve.
pub fn curve_geometry(curve: &ClosedCurve, opts: &GeometryOptions) -> Result<ShapeData> {
    let pts = curve.points();
    let m = pts.len();
    let h = curve.spacing();
    let sigma = orientation(pts);
    let base = &opts.base_point[..2];

    let mut points = Vec::with_capacity(m);
    let mut turning = 0.0;
    let mut prev_angle: Option<f64> = None;
    let mut first_angle = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let (d1, d2) = derivatives(curve, i);
        let speed = d1[0].hypot(d1[1]);
        if !(speed > 0.0) {
            return Err(Error::Degenerate(format!("zero tangent at sample {i}")));
        }
        let t = [d1[0] / speed, d1[1] / speed];
        let cross = d1[0] * d2[1] - d1[1] * d2[0];
        let k = sigma * cross / speed.powi(3);
        if !(k > 0.0) {
            return Err(Error::NotConvex {
                index: i,
                curvature: k,
            });
        }
        let angle = t[1].atan2(t[0]);
        match prev_angle {
            Some(p) => turning += wrap_angle(angle - p),
            None => first_angle = angle,
        }
        prev_angle = Some(angle);

        let normal = vec![-sigma * t[1], sigma * t[0]];
        let g = speed * speed;
        points.push(PointGeometry::assemble(
            p.to_vec(),
            normal,
            Mat::from_diag(&[g]),
            Mat::from_diag(&[k * g]),
            vec![k],
            base,
            speed * h,
        )?);
    }
    if let Some(p) = prev_angle {
        turning += wrap_angle(first_angle - p);
    }
    let turning = turning.abs() / std::f64::consts::TAU;
    if (turning - 1.0).abs() > 1e-6 {
        return Err(Error::NotSimple { turning });
    }
    Ok(ShapeData { dim: 1, points })
}

fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    (a + PI).rem_euclid(TAU) - PI
}
