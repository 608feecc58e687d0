//! Versioned experiment configuration, one optional section per command.
//!
//! ```toml
//! format_version = 1
//! seed = 7
//!
//! [flow]
//! surface = "ellipse 2 1"
//! f = "H"
//! rescale = "fixed-scale"
//! r_tol = 0.01
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context as _;
use serde::{Deserialize, Serialize};
use solitonlab::curvfun::Convexity;
use solitonlab::flow::RescaleMode;

use crate::usage;

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere_check: Option<SphereCheckConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_suite: Option<IdentitySuiteConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_pinching: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soliton_fit: Option<SolitonFitConfig>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            seed: None,
            sphere_check: None,
            identity_suite: None,
            flow: None,
            sweep_pinching: None,
            soliton_fit: None,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let config: Self = match toml::from_str(text) {
            Ok(c) => c,
            Err(e) => return usage(format!("invalid configuration: {e}")),
        };
        if config.format_version != FORMAT_VERSION {
            return usage(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                config.format_version
            ));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return usage(format!("cannot read config {}: {e}", path.display())),
        };
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SphereCheckConfig {
    pub f: String,
    pub radius: f64,
    pub c: f64,
    pub n: usize,
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for SphereCheckConfig {
    fn default() -> Self {
        Self {
            f: "H".into(),
            radius: 1.0,
            c: 0.0,
            n: 2,
            samples: 200,
            tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentitySuiteConfig {
    /// Random samples per family and identity.
    pub samples: usize,
}

impl Default for IdentitySuiteConfig {
    fn default() -> Self {
        Self { samples: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlowSection {
    /// `circle R`, `ellipse a b`, `sphere R`, `spheroid axial equatorial`,
    /// `profile PATH` or `snapshot PATH`.
    pub surface: String,
    pub f: String,
    pub grid: usize,
    pub rescale: RescaleMode,
    pub dt_safety: f64,
    pub t_max: f64,
    pub r_tol: f64,
    pub curvature_cap: f64,
    pub min_scale_fraction: f64,
    pub record_every: usize,
    pub max_steps: usize,
    pub c: f64,
}

impl Default for FlowSection {
    fn default() -> Self {
        Self {
            surface: "circle 1".into(),
            f: "H".into(),
            grid: 256,
            rescale: RescaleMode::None,
            dt_safety: 0.4,
            t_max: 1.0,
            r_tol: 0.0,
            curvature_cap: 1e6,
            min_scale_fraction: 1e-3,
            record_every: 100,
            max_steps: 10_000_000,
            c: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub n: usize,
    /// Explicit degrees; when present the range fields are ignored.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<f64>>,
    pub m_min: f64,
    pub m_max: f64,
    pub count: usize,
    pub classification: Convexity,
    /// Pinching ratio tested against each threshold.
    pub r_max: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 2,
            m: None,
            m_min: 1.5,
            m_max: 100.0,
            count: 50,
            classification: Convexity::Neither,
            r_max: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonFitConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<PathBuf>,
    pub f: String,
    /// Base point of the support function; defaults to the centroid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[f64; 3]>,
}

impl Default for SolitonFitConfig {
    fn default() -> Self {
        Self {
            snapshot: None,
            f: "H".into(),
            base_point: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::UsageError;

    const FULL: &str = r#"
format_version = 1
seed = 7

[sphere_check]
f = "K"
radius = 1.5
c = -1.0
n = 2
samples = 64
tolerance = 1e-9

[identity_suite]
samples = 10

[flow]
surface = "ellipse 2 1"
f = "H"
grid = 128
rescale = "fixed-scale"
dt_safety = 0.3
t_max = 5.0
r_tol = 0.01
curvature_cap = 1000.0
min_scale_fraction = 0.01
record_every = 10
max_steps = 1000
c = 0.0

[sweep_pinching]
n = 2
m = [3.0, 9.0, -7.0]
m_min = 1.5
m_max = 10.0
count = 5
classification = "convex"
r_max = 1.2

[soliton_fit]
snapshot = "final.json"
f = "H"
base_point = [0.0, 0.0, 0.0]
"#;

    #[test]
    fn round_trip_is_identity() {
        let a = ExperimentConfig::parse(FULL).unwrap();
        let b = ExperimentConfig::parse(&a.to_toml().unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.flow.as_ref().unwrap().rescale, RescaleMode::FixedScale);
        assert_eq!(b.sweep_pinching.as_ref().unwrap().classification, Convexity::Convex);
        let minimal = ExperimentConfig::parse("format_version = 1").unwrap();
        assert_eq!(minimal, ExperimentConfig::default());
        assert_eq!(ExperimentConfig::parse(&minimal.to_toml().unwrap()).unwrap(), minimal);
    }

    #[test]
    fn unknown_keys_and_versions_are_rejected() {
        for bad in [
            "format_version = 1\nsed = 3",
            "format_version = 1\n[flow]\nsurfce = \"circle 1\"",
            "format_version = 2",
            "seed = 1",
            "format_version = 1\n[flow]\nrescale = \"sometimes\"",
        ] {
            let err = ExperimentConfig::parse(bad).unwrap_err();
            assert!(err.downcast_ref::<UsageError>().is_some(), "{bad}");
        }
    }
}
