//! Surface constructor strings.

use std::path::Path;

use serde::Deserialize;
use solitonlab::hypersurface::{DiscreteHypersurface, RevolutionProfile, Snapshot};

use crate::usage;

#[derive(Deserialize)]
struct ProfileRow {
    x: f64,
    y: f64,
}

/// Builds the surface named by `spec`:
///
/// * `circle R`, `ellipse a b` (curves, `grid` samples);
/// * `sphere R`, `spheroid axial equatorial` (surfaces of revolution about the
///   x-axis, `grid` profile intervals);
/// * `profile PATH`: revolution profile from a CSV file with columns `x,y`,
///   running from one pole to the other;
/// * `snapshot PATH`: a snapshot document.
pub fn parse_surface(spec: &str, grid: usize) -> anyhow::Result<DiscreteHypersurface> {
    let words: Vec<&str> = spec.split_whitespace().collect();
    let Some((&kind, rest)) = words.split_first() else {
        return usage("empty surface specification");
    };
    let numbers = |count: usize| -> anyhow::Result<Vec<f64>> {
        if rest.len() != count {
            return usage(format!("`{kind}` takes {count} number(s), got `{spec}`"));
        }
        rest.iter()
            .map(|w| match w.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
                _ => usage(format!("`{w}` in `{spec}` is not a positive number")),
            })
            .collect()
    };
    let path = || -> anyhow::Result<&Path> {
        if rest.len() != 1 {
            return usage(format!("`{kind}` takes one path, got `{spec}`"));
        }
        Ok(Path::new(rest[0]))
    };
    let built = match kind {
        "circle" => DiscreteHypersurface::circle(numbers(1)?[0], grid),
        "ellipse" => {
            let v = numbers(2)?;
            DiscreteHypersurface::ellipse(v[0], v[1], grid)
        }
        "sphere" => DiscreteHypersurface::sphere(numbers(1)?[0], grid),
        "spheroid" => {
            let v = numbers(2)?;
            DiscreteHypersurface::spheroid(v[0], v[1], grid)
        }
        "profile" => return read_profile(path()?),
        "snapshot" => return read_snapshot(path()?),
        _ => return usage(format!("unknown surface `{kind}` (expected circle, ellipse, sphere, spheroid, profile or snapshot)")),
    };
    built.or_else(|e| usage(format!("surface `{spec}`: {e}")))
}

fn read_profile(path: &Path) -> anyhow::Result<DiscreteHypersurface> {
    let mut reader = match csv::Reader::from_path(path) {
        Ok(r) => r,
        Err(e) => return usage(format!("cannot read profile {}: {e}", path.display())),
    };
    let mut points = Vec::new();
    for row in reader.deserialize::<ProfileRow>() {
        match row {
            Ok(r) => points.push([r.x, r.y]),
            Err(e) => return usage(format!("profile {}: {e}", path.display())),
        }
    }
    match RevolutionProfile::new(points) {
        Ok(p) => Ok(DiscreteHypersurface::Revolution(p)),
        Err(e) => usage(format!("profile {}: {e}", path.display())),
    }
}

pub fn read_snapshot(path: &Path) -> anyhow::Result<DiscreteHypersurface> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read snapshot {}: {e}", path.display())),
    };
    match Snapshot::from_json(&text).and_then(|s| s.to_surface()) {
        Ok(s) => Ok(s),
        Err(e) => usage(format!("snapshot {}: {e}", path.display())),
    }
}
