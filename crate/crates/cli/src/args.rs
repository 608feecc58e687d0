//! Command-line arguments. Every command option overrides the matching key of
//! the configuration file section.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use solitonlab::curvfun::Convexity;
use solitonlab::flow::RescaleMode;

use crate::config::{FlowSection, IdentitySuiteConfig, SolitonFitConfig, SphereCheckConfig, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "solitonlab", version, about = "Curvature-flow and soliton experiments")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed of the random generator.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory (default: current directory).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Accept c > 0 in sphere-check.
    #[arg(long, global = true)]
    pub allow_positive_c: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sphere soliton constant and residual on a sampled geodesic sphere.
    SphereCheck(SphereCheckArgs),
    /// Randomized checks of the curvature-function and hypersurface identities.
    IdentitySuite(IdentitySuiteArgs),
    /// Integrate the curvature flow and write the trace and final surface.
    Flow(FlowArgs),
    /// Pinching thresholds over a range of degrees.
    SweepPinching(SweepArgs),
    /// Least-squares soliton constant of a surface snapshot.
    SolitonFit(FitArgs),
}

macro_rules! set {
    ($section:ident, $args:ident, $($field:ident),+) => {
        $(if let Some(v) = $args.$field { $section.$field = v; })+
    };
}

#[derive(Debug, Args)]
pub struct SphereCheckArgs {
    /// Curvature function, e.g. `H`, `K`, `pow(sigma2,-1)`.
    #[arg(long)]
    pub f: Option<String>,
    /// Geodesic radius.
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Ambient sectional curvature.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Hypersurface dimension.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl SphereCheckArgs {
    pub fn merge(self, mut s: SphereCheckConfig) -> SphereCheckConfig {
        set!(s, self, f, radius, c, n, samples, tolerance);
        s
    }
}

#[derive(Debug, Args)]
pub struct IdentitySuiteArgs {
    #[arg(long)]
    pub samples: Option<usize>,
}

impl IdentitySuiteArgs {
    pub fn merge(self, mut s: IdentitySuiteConfig) -> IdentitySuiteConfig {
        set!(s, self, samples);
        s
    }
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// Initial surface, e.g. `"ellipse 2 1"`.
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_parser = parse_rescale)]
    pub rescale: Option<RescaleMode>,
    #[arg(long)]
    pub dt_safety: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub r_tol: Option<f64>,
    #[arg(long)]
    pub curvature_cap: Option<f64>,
    #[arg(long)]
    pub min_scale_fraction: Option<f64>,
    #[arg(long)]
    pub record_every: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

impl FlowArgs {
    pub fn merge(self, mut s: FlowSection) -> FlowSection {
        set!(
            s,
            self,
            surface,
            f,
            grid,
            rescale,
            dt_safety,
            t_max,
            r_tol,
            curvature_cap,
            min_scale_fraction,
            record_every,
            max_steps,
            c
        );
        s
    }
}

fn parse_rescale(s: &str) -> Result<RescaleMode, String> {
    match s {
        "none" => Ok(RescaleMode::None),
        "fixed-scale" => Ok(RescaleMode::FixedScale),
        _ => Err(format!("unknown rescale mode `{s}` (expected none or fixed-scale)")),
    }
}

fn parse_convexity(s: &str) -> Result<Convexity, String> {
    match s {
        "convex" => Ok(Convexity::Convex),
        "concave" => Ok(Convexity::Concave),
        "neither" => Ok(Convexity::Neither),
        _ => Err(format!("unknown classification `{s}` (expected convex, concave or neither)")),
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Explicit degree; repeat for several.
    #[arg(long = "m", allow_hyphen_values = true)]
    pub m: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m_max: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_parser = parse_convexity)]
    pub classification: Option<Convexity>,
    #[arg(long)]
    pub r_max: Option<f64>,
}

impl SweepArgs {
    pub fn merge(self, mut s: SweepConfig) -> SweepConfig {
        if !self.m.is_empty() {
            s.m = Some(self.m);
        } else if self.m_min.is_some() || self.m_max.is_some() || self.count.is_some() {
            s.m = None;
        }
        set!(s, self, n, m_min, m_max, count, classification, r_max);
        s
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Snapshot document written by `flow`.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long)]
    pub f: Option<String>,
    /// Base point `x,y,z` of the support function.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub base_point: Option<[f64; 3]>,
}

impl FitArgs {
    pub fn merge(self, mut s: SolitonFitConfig) -> SolitonFitConfig {
        set!(s, self, f);
        if self.snapshot.is_some() {
            s.snapshot = self.snapshot;
        }
        if self.base_point.is_some() {
            s.base_point = self.base_point;
        }
        s
    }
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y] => Ok([x, y, 0.0]),
        [x, y, z] => Ok([x, y, z]),
        _ => Err(format!("expected 2 or 3 comma-separated coordinates, got {}", v.len())),
    }
}
