use serde_json::json;
use solitonlab::flow::{run as run_flow, FlowConfig, FlowTrace, Outcome};
use solitonlab::hypersurface::Snapshot;

use super::{parse_f, Context};
use crate::config::{ExperimentConfig, FlowSection};
use crate::output::{ensure_dir, write_config, write_csv};
use crate::surface::parse_surface;
use crate::{usage, Status};

pub const TRACE_FILE: &str = "flow_trace.csv";
pub const SNAPSHOT_FILE: &str = "flow_final.json";

/// Validates the section and runs the flow.
pub fn integrate(cfg: &FlowSection) -> anyhow::Result<FlowTrace> {
    let surface = parse_surface(&cfg.surface, cfg.grid)?;
    let f = parse_f(&cfg.f, surface.dim())?;
    let config = FlowConfig {
        f,
        dt_safety: cfg.dt_safety,
        rescale: cfg.rescale,
        t_max: cfg.t_max,
        r_tol: cfg.r_tol,
        curvature_cap: cfg.curvature_cap,
        min_scale_fraction: cfg.min_scale_fraction,
        record_every: cfg.record_every,
        max_steps: cfg.max_steps,
        c: cfg.c,
    };
    if let Err(e) = config.validate() {
        return usage(format!("flow configuration: {e}"));
    }
    if let Err(e) = surface.geometry(&Default::default()) {
        return usage(format!("initial surface `{}`: {e}", cfg.surface));
    }
    Ok(run_flow(&config, &surface)?)
}

pub fn run(ctx: &Context, config: &ExperimentConfig, cfg: &FlowSection) -> anyhow::Result<Status> {
    let trace = integrate(cfg)?;
    let dir = ctx.out_dir();
    ensure_dir(dir)?;
    write_csv(&dir.join(TRACE_FILE), &trace.rows)?;
    let last = trace.last();
    let outcome = match &trace.outcome {
        Outcome::Stopped(reason) => serde_json::to_value(reason)?,
        Outcome::Aborted(msg) => json!({ "aborted": msg }),
    };
    let snapshot = Snapshot::from_surface(&trace.surface)
        .with_metadata("seed", config.seed())
        .with_metadata("f", cfg.f.as_str())
        .with_metadata("initial_surface", cfg.surface.as_str())
        .with_metadata("t", last.t)
        .with_metadata("steps", trace.steps)
        .with_metadata("outcome", outcome)
        .with_metadata("unscaled_fraction", trace.unscaled_fraction);
    std::fs::write(dir.join(SNAPSHOT_FILE), snapshot.to_json()? + "\n")?;
    write_config(dir, "flow", config)?;
    println!(
        "t = {:.6}, steps = {}, r_max = {:.8}, F_aniso_max = {:.3e}, rel_residual = {:.3e}, outcome = {:?}",
        last.t, trace.steps, last.r_max, last.f_aniso_max, last.rel_residual, trace.outcome
    );
    if let Outcome::Aborted(msg) = &trace.outcome {
        eprintln!("flow aborted: {msg}; partial trace written to {}", dir.join(TRACE_FILE).display());
        return Ok(Status::Fail);
    }
    Ok(Status::Pass)
}
