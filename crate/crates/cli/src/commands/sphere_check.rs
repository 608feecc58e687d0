use serde::Serialize;
use solitonlab::soliton::{geodesic_sphere_samples, residual_field, sphere_tau};
use solitonlab::spaceform::SpaceFormParams;

use super::{parse_f, Context};
use crate::config::{ExperimentConfig, SphereCheckConfig};
use crate::output::{ensure_dir, write_json};
use crate::{usage, Status};

#[derive(Debug, Serialize)]
pub struct SphereCheckReport {
    pub f: String,
    pub n: usize,
    pub c: f64,
    pub radius: f64,
    pub tau: f64,
    /// `max |F + τZ| / max(1, |F|)`.
    pub max_residual: f64,
    pub samples: usize,
    /// `closed-form` when `c > 0`, where no sampled model is available.
    pub method: &'static str,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn check(ctx: &Context, cfg: &SphereCheckConfig) -> anyhow::Result<SphereCheckReport> {
    if !(1..=3).contains(&cfg.n) {
        return usage(format!("n = {} must be 1, 2 or 3", cfg.n));
    }
    let f = parse_f(&cfg.f, cfg.n)?;
    if !(cfg.radius > 0.0 && cfg.radius.is_finite()) {
        return usage(format!("R = {} must be positive and finite", cfg.radius));
    }
    if !cfg.c.is_finite() {
        return usage(format!("c = {} must be finite", cfg.c));
    }
    if cfg.c > 0.0 && !ctx.allow_positive_c {
        return usage(format!("c = {} > 0 requires --allow-positive-c", cfg.c));
    }
    if cfg.samples == 0 {
        return usage("samples must be positive");
    }
    if !(cfg.tolerance > 0.0) {
        return usage(format!("tolerance {} must be positive", cfg.tolerance));
    }
    let space = SpaceFormParams::unrestricted(cfg.c)?;
    let tau = sphere_tau(&f, cfg.radius, &space).or_else(|e| usage(format!("{e}")))?;
    let (max_residual, samples, method) = if cfg.c <= 0.0 {
        let shape = geodesic_sphere_samples(cfg.n, cfg.radius, &space, cfg.samples)?;
        let res = residual_field(&shape, &f, tau)?;
        let mut worst = 0.0f64;
        for (p, r) in shape.points.iter().zip(&res) {
            let value = f.eval_slice(&p.principal)?;
            worst = worst.max(r.abs() / value.abs().max(1.0));
        }
        (worst, cfg.samples, "sampled")
    } else {
        let (s, c) = (space.shc(cfg.radius), space.chc(cfg.radius));
        let value = f.eval_slice(&vec![c / s; cfg.n])?;
        ((value - tau * s).abs() / value.abs().max(1.0), 1, "closed-form")
    };
    Ok(SphereCheckReport {
        f: f.to_string(),
        n: cfg.n,
        c: cfg.c,
        radius: cfg.radius,
        tau,
        max_residual,
        samples,
        method,
        tolerance: cfg.tolerance,
        pass: max_residual < cfg.tolerance,
    })
}

pub fn run(ctx: &Context, config: &ExperimentConfig, cfg: &SphereCheckConfig) -> anyhow::Result<Status> {
    let report = check(ctx, cfg)?;
    println!("f = {}, n = {}, c = {}, R = {}", report.f, report.n, report.c, report.radius);
    println!("tau = {:.10}", report.tau);
    println!(
        "max |F + tau Z| / max(1,|F|) = {:.3e} ({} {}, tolerance {:.0e})",
        report.max_residual,
        report.samples,
        if report.method == "sampled" { "samples" } else { "closed-form evaluation" },
        report.tolerance
    );
    println!("{}", if report.pass { "pass" } else { "FAIL" });
    if let Some(dir) = &ctx.out {
        ensure_dir(dir)?;
        write_json(&dir.join("sphere_check.json"), &report)?;
        crate::output::write_config(dir, "sphere_check", config)?;
    }
    Ok(Status::from_pass(report.pass))
}
