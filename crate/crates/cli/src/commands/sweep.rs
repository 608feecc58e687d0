//! Pinching thresholds over a list of degrees, computed in parallel and
//! written in ascending order of `m`.

use rayon::prelude::*;
use serde::Serialize;
use solitonlab::soliton::{admissibility, binding_root};

use super::Context;
use crate::config::{ExperimentConfig, SweepConfig};
use crate::output::{ensure_dir, write_config, write_csv};
use crate::{usage, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: f64,
    /// Numeric bound, `unconditional` or `uncovered`.
    pub threshold: String,
    /// `|threshold − root of the binding quadratic|`; empty without a bound.
    pub root_residual: Option<f64>,
    /// Conditions satisfied at the configured `r_max`, `;`-separated.
    pub covered_by: String,
    pub admissible: bool,
    /// For `m > 1`: whether the bound is below the previous row's bound and above 1.
    pub decreasing: Option<bool>,
}

/// Degrees listed in the configuration, validated.
pub fn degrees(cfg: &SweepConfig) -> anyhow::Result<Vec<f64>> {
    let values = match &cfg.m {
        Some(list) => {
            if list.is_empty() {
                return usage("empty list of degrees");
            }
            list.clone()
        }
        None => {
            if cfg.count == 0 {
                return usage("count must be positive");
            }
            if !(cfg.m_min <= cfg.m_max) {
                return usage(format!("m_min {} exceeds m_max {}", cfg.m_min, cfg.m_max));
            }
            if cfg.m_min <= 0.0 && cfg.m_max >= 0.0 {
                return usage(format!(
                    "degree range [{}, {}] contains 0; the degree must be nonzero",
                    cfg.m_min, cfg.m_max
                ));
            }
            let step = if cfg.count > 1 { (cfg.m_max - cfg.m_min) / (cfg.count - 1) as f64 } else { 0.0 };
            (0..cfg.count).map(|k| cfg.m_min + step * k as f64).collect()
        }
    };
    for &m in &values {
        if !m.is_finite() || m == 0.0 {
            return usage(format!("degree {m} must be finite and nonzero"));
        }
    }
    Ok(values)
}

fn row(cfg: &SweepConfig, m: f64) -> anyhow::Result<SweepRow> {
    let v = admissibility(cfg.n, m, cfg.classification, cfg.r_max)?;
    let unconditional = cfg.n == 2 && (m == 1.0 || (-7.0..0.0).contains(&m));
    let (threshold, root_residual) = match v.threshold_2iii {
        Some(t) => {
            let root = binding_root(m).unwrap_or(f64::NAN);
            (t.to_string(), Some((t - root).abs()))
        }
        None if unconditional => ("unconditional".to_string(), None),
        None => ("uncovered".to_string(), None),
    };
    let covered_by = v.covered_by.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
    Ok(SweepRow {
        m,
        threshold,
        root_residual,
        covered_by,
        admissible: v.admissible,
        decreasing: None,
    })
}

pub fn sweep(cfg: &SweepConfig) -> anyhow::Result<Vec<SweepRow>> {
    if cfg.n == 0 {
        return usage("n must be positive");
    }
    if !(cfg.r_max >= 1.0) || !cfg.r_max.is_finite() {
        return usage(format!("r_max {} must be finite and at least 1", cfg.r_max));
    }
    let ms = degrees(cfg)?;
    let mut rows = ms.par_iter().map(|&m| row(cfg, m)).collect::<anyhow::Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.m.total_cmp(&b.m));
    let mut prev: Option<f64> = None;
    for r in rows.iter_mut().filter(|r| r.m > 1.0 && r.root_residual.is_some()) {
        let t: f64 = r.threshold.parse()?;
        r.decreasing = Some(t > 1.0 && prev.is_none_or(|p| t < p));
        prev = Some(t);
    }
    Ok(rows)
}

pub fn run(ctx: &Context, config: &ExperimentConfig, cfg: &SweepConfig) -> anyhow::Result<Status> {
    let rows = sweep(cfg)?;
    let dir = ctx.out_dir();
    ensure_dir(dir)?;
    let path = dir.join("sweep_pinching.csv");
    write_csv(&path, &rows)?;
    write_config(dir, "sweep_pinching", config)?;
    let worst = rows.iter().filter_map(|r| r.root_residual).fold(0.0, f64::max);
    let monotone = rows.iter().all(|r| r.decreasing != Some(false));
    println!(
        "{} degrees; max root residual {worst:.3e}; thresholds decreasing: {monotone}; wrote {}",
        rows.len(),
        path.display()
    );
    Ok(Status::from_pass(worst < 1e-12 && monotone))
}
