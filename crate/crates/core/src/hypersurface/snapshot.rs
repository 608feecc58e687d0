//! Versioned JSON document for surface snapshots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ClosedCurve, DiscreteHypersurface, Ellipsoid, RevolutionProfile};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub format_version: u32,
    /// One of `curve`, `revolution`, `ellipsoid`.
    pub variant: String,
    pub grid: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_axes: Option<Vec<f64>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Snapshot {
    pub fn from_surface(surface: &DiscreteHypersurface) -> Self {
        let mut s = Self {
            format_version: FORMAT_VERSION,
            variant: surface.variant_name().to_string(),
            grid: surface.grid_size(),
            positions: None,
            profile: None,
            semi_axes: None,
            metadata: BTreeMap::new(),
        };
        match surface {
            DiscreteHypersurface::Curve(c) => s.positions = Some(c.points().to_vec()),
            DiscreteHypersurface::Revolution(p) => s.profile = Some(p.points().to_vec()),
            DiscreteHypersurface::Ellipsoid(e) => s.semi_axes = Some(e.axes().to_vec()),
        }
        s
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn to_surface(&self) -> Result<DiscreteHypersurface> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let missing = |field: &str| Error::Snapshot(format!("{} snapshot lacks `{field}`", self.variant));
        let surface = match self.variant.as_str() {
            "curve" => DiscreteHypersurface::Curve(ClosedCurve::new(
                self.positions.clone().ok_or_else(|| missing("positions"))?,
            )?),
            "revolution" => DiscreteHypersurface::Revolution(RevolutionProfile::new(
                self.profile.clone().ok_or_else(|| missing("profile"))?,
            )?),
            "ellipsoid" => DiscreteHypersurface::Ellipsoid(Ellipsoid::new(
                self.semi_axes.clone().ok_or_else(|| missing("semi_axes"))?,
                self.grid,
            )?),
            other => return Err(Error::Snapshot(format!("unknown variant `{other}`"))),
        };
        if surface.grid_size() != self.grid {
            return Err(Error::Snapshot(format!(
                "grid {} does not match the {} stored samples",
                self.grid,
                surface.grid_size()
            )));
        }
        Ok(surface)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Snapshot(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
