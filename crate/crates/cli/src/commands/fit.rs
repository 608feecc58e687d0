use serde::Serialize;
use solitonlab::flow::centroid;
use solitonlab::hypersurface::{DiscreteHypersurface, GeometryOptions};
use solitonlab::soliton::{fit_tau, SolitonReport};

use super::{parse_f, Context};
use crate::config::{ExperimentConfig, SolitonFitConfig};
use crate::output::{ensure_dir, write_config, write_json};
use crate::surface::read_snapshot;
use crate::{usage, Status};

#[derive(Debug, Serialize)]
pub struct FitOutput {
    pub f: String,
    pub base_point: [f64; 3],
    #[serde(flatten)]
    pub report: SolitonReport,
}

pub fn fit(cfg: &SolitonFitConfig) -> anyhow::Result<FitOutput> {
    let Some(path) = &cfg.snapshot else {
        return usage("soliton-fit needs --snapshot PATH");
    };
    let surface = read_snapshot(path)?;
    let f = parse_f(&cfg.f, surface.dim())?;
    let base = match cfg.base_point {
        Some(p) => p,
        None => {
            let shape = surface
                .geometry(&GeometryOptions::default())
                .or_else(|e| usage(format!("snapshot {}: {e}", path.display())))?;
            let mut c = centroid(&shape);
            if let DiscreteHypersurface::Revolution(_) = surface {
                c[1] = 0.0;
                c[2] = 0.0;
            }
            c
        }
    };
    let shape = surface
        .geometry(&GeometryOptions::with_base_point(base))
        .or_else(|e| usage(format!("snapshot {}: {e}", path.display())))?;
    Ok(FitOutput {
        f: f.to_string(),
        base_point: base,
        report: fit_tau(&shape, &f)?,
    })
}

pub fn run(ctx: &Context, config: &ExperimentConfig, cfg: &SolitonFitConfig) -> anyhow::Result<Status> {
    let out = fit(cfg)?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    if let Some(dir) = &ctx.out {
        ensure_dir(dir)?;
        write_json(&dir.join("soliton_fit.json"), &out)?;
        write_config(dir, "soliton_fit", config)?;
    }
    Ok(Status::Pass)
}
