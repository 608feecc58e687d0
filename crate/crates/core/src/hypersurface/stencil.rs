//! Fourth-order central finite differences on uniform grids.

/// First-derivative weights for offsets `-2..=2` (divide by `h`).
pub const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
/// Second-derivative weights for offsets `-2..=2` (divide by `h²`).
pub const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

pub const OFFSETS: [isize; 5] = [-2, -1, 0, 1, 2];

/// Applies a five-point stencil to `get(offset)`.
#[inline]
pub fn apply(weights: &[f64; 5], get: impl Fn(isize) -> f64) -> f64 {
    OFFSETS
        .iter()
        .zip(weights)
        .fold(0.0, |acc, (&o, &w)| if w == 0.0 { acc } else { acc + w * get(o) })
}

#[inline]
pub fn d1(get: impl Fn(isize) -> f64, h: f64) -> f64 {
    apply(&D1, get) / h
}

#[inline]
pub fn d2(get: impl Fn(isize) -> f64, h: f64) -> f64 {
    apply(&D2, get) / (h * h)
}

/// Mixed derivative `∂_u ∂_v` from the tensor product of two first-derivative stencils.
pub fn d11(get: impl Fn(isize, isize) -> f64, hu: f64, hv: f64) -> f64 {
    let mut acc = 0.0;
    for (&a, &wa) in OFFSETS.iter().zip(&D1) {
        if wa == 0.0 {
            continue;
        }
        for (&b, &wb) in OFFSETS.iter().zip(&D1) {
            if wb == 0.0 {
                continue;
            }
            acc += wa * wb * get(a, b);
        }
    }
    acc / (hu * hv)
}

/// One-sided fourth-order first derivative at the left end of a sample run.
pub fn d1_forward(v: [f64; 5], h: f64) -> f64 {
    (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h)
}

#[inline]
pub fn wrap(i: isize, m: usize) -> usize {
    i.rem_euclid(m as isize) as usize
}

/// Sixth-order first-derivative weights for offsets `-3..=3`.
pub const D1_6: [f64; 7] = [
    -1.0 / 60.0,
    9.0 / 60.0,
    -45.0 / 60.0,
    0.0,
    45.0 / 60.0,
    -9.0 / 60.0,
    1.0 / 60.0,
];
/// Sixth-order second-derivative weights for offsets `-3..=3`.
pub const D2_6: [f64; 7] = [
    2.0 / 180.0,
    -27.0 / 180.0,
    270.0 / 180.0,
    -490.0 / 180.0,
    270.0 / 180.0,
    -27.0 / 180.0,
    2.0 / 180.0,
];

#[inline]
fn apply7(weights: &[f64; 7], get: impl Fn(isize) -> f64) -> f64 {
    (-3..=3)
        .zip(weights)
        .fold(0.0, |acc, (o, &w)| if w == 0.0 { acc } else { acc + w * get(o) })
}

#[inline]
pub fn d1_6(get: impl Fn(isize) -> f64, h: f64) -> f64 {
    apply7(&D1_6, get) / h
}

#[inline]
pub fn d2_6(get: impl Fn(isize) -> f64, h: f64) -> f64 {
    apply7(&D2_6, get) / (h * h)
}
