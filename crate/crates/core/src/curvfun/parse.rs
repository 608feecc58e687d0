//! Grammar: `H | K | sigma<k> | norm | geomean | anisotropy | pow(<spec>,<p>)`.
//! Case-sensitive; `p` is a decimal number or a fraction `a/b`.

use super::Family;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(super) fn parse_family<T: Scalar>(spec: &str) -> Result<Family<T>> {
    let s = spec.trim();
    let (family, rest) = parse_term::<T>(s)?;
    if !rest.trim().is_empty() {
        return Err(Error::Parse(format!("trailing input {rest:?} in {spec:?}")));
    }
    Ok(family)
}

fn parse_term<T: Scalar>(s: &str) -> Result<(Family<T>, &str)> {
    let s = s.trim_start();
    if let Some(inner) = s.strip_prefix("pow(") {
        let (base, rest) = parse_term::<T>(inner)?;
        let rest = rest
            .trim_start()
            .strip_prefix(',')
            .ok_or_else(|| Error::Parse(format!("expected ',' in pow(...) near {rest:?}")))?;
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse("unterminated pow(...)".into()))?;
        let exponent = parse_number::<T>(&rest[..close])?;
        return Ok((
            Family::Power {
                base: Box::new(base),
                exponent,
            },
            &rest[close + 1..],
        ));
    }
    let end = s
        .find(|c: char| !c.is_ascii_alphanumeric())
        .unwrap_or(s.len());
    let (word, rest) = s.split_at(end);
    let family = match word {
        "H" => Family::Mean,
        "K" => Family::Gauss,
        "norm" => Family::Norm,
        "geomean" => Family::GeometricMean,
        "anisotropy" => Family::Anisotropy,
        w if w.starts_with("sigma") => {
            let k: usize = w["sigma".len()..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad elementary-symmetric index in {w:?}")))?;
            Family::ElementarySymmetric(k)
        }
        "" => return Err(Error::Parse(format!("expected a curvature function near {s:?}"))),
        w => return Err(Error::Parse(format!("unknown curvature function {w:?}"))),
    };
    Ok((family, rest))
}

fn parse_number<T: Scalar>(s: &str) -> Result<T> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad exponent {s:?}"));
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            num / den
        }
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(T::lit(value))
}
