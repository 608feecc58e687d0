//! Tangential redistribution to uniform chord arclength by cubic Lagrange
//! interpolation.

fn lagrange4(s: [f64; 4], p: [[f64; 2]; 4], x: f64) -> [f64; 2] {
    let mut out = [0.0; 2];
    for i in 0..4 {
        let mut w = 1.0;
        for j in 0..4 {
            if i != j {
                w *= (x - s[j]) / (s[i] - s[j]);
            }
        }
        out[0] += w * p[i][0];
        out[1] += w * p[i][1];
    }
    out
}

fn chord(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn resample(node: impl Fn(isize) -> (f64, [f64; 2]), cumulative: &[f64], targets: impl Iterator<Item = f64>) -> Vec<[f64; 2]> {
    let mut i = 0usize;
    targets
        .map(|sigma| {
            while i + 1 < cumulative.len() && cumulative[i + 1] <= sigma {
                i += 1;
            }
            let base = i as isize - 1;
            let nodes: [(f64, [f64; 2]); 4] = std::array::from_fn(|k| node(base + k as isize));
            lagrange4(nodes.map(|n| n.0), nodes.map(|n| n.1), sigma)
        })
        .collect()
}

/// Redistributes a closed polygon to equal chord arclength, keeping sample 0.
pub fn closed_curve(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let m = points.len();
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for i in 0..m {
        let next = cumulative[i] + chord(points[i], points[(i + 1) % m]);
        cumulative.push(next);
    }
    let total = cumulative[m];
    let node = |i: isize| {
        let k = i.rem_euclid(m as isize) as usize;
        let lap = i.div_euclid(m as isize) as f64;
        (cumulative[k] + lap * total, points[k])
    };
    resample(node, &cumulative, (0..m).map(|k| total * k as f64 / m as f64))
}

/// Redistributes a revolution profile to equal chord arclength, keeping both
/// poles and continuing the profile across them by reflection.
pub fn profile(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let m = points.len() - 1;
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for j in 0..m {
        let next = cumulative[j] + chord(points[j], points[j + 1]);
        cumulative.push(next);
    }
    let total = cumulative[m];
    let mi = m as isize;
    let node = |j: isize| {
        if j < 0 {
            let p = points[(-j) as usize];
            (-cumulative[(-j) as usize], [p[0], -p[1]])
        } else if j > mi {
            let k = (2 * mi - j) as usize;
            let p = points[k];
            (2.0 * total - cumulative[k], [p[0], -p[1]])
        } else {
            (cumulative[j as usize], points[j as usize])
        }
    };
    let mut out = resample(node, &cumulative[..m], (0..=m).map(|k| total * k as f64 / m as f64));
    out[0] = points[0];
    out[m] = points[m];
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_circle_is_fixed() {
        let m = 64;
        let pts: Vec<[f64; 2]> = (0..m)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / m as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        for (a, b) in closed_curve(&pts).iter().zip(&pts) {
            assert!(chord(*a, *b) < 1e-14);
        }
    }

    #[test]
    fn equalizes_chords() {
        let m = 128;
        let pts: Vec<[f64; 2]> = (0..m)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / m as f64;
                [2.0 * t.cos(), t.sin()]
            })
            .collect();
        let out = closed_curve(&pts);
        let chords: Vec<f64> = (0..m).map(|i| chord(out[i], out[(i + 1) % m])).collect();
        let (lo, hi) = chords.iter().fold((f64::MAX, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
        assert!(hi / lo < 1.001, "{lo} {hi}");
        for p in &out {
            let e = (p[0] * p[0] / 4.0 + p[1] * p[1] - 1.0).abs();
            assert!(e < 1e-5, "{e}");
        }
    }

    #[test]
    fn profile_keeps_poles() {
        let m = 64;
        let pts: Vec<[f64; 2]> = (0..=m)
            .map(|j| {
                let s = std::f64::consts::PI * j as f64 / m as f64;
                [1.3 * s.cos(), s.sin()]
            })
            .collect();
        let out = profile(&pts);
        assert_eq!(out[0], pts[0]);
        assert_eq!(out[m], pts[m]);
        let chords: Vec<f64> = (0..m).map(|j| chord(out[j], out[j + 1])).collect();
        let (lo, hi) = chords.iter().fold((f64::MAX, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
        assert!(hi / lo < 1.01, "{lo} {hi}");
    }
}
