//! Output files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use serde::Serialize;

use crate::config::ExperimentConfig;

pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

/// Writes `rows` as CSV with a header derived from the row type.
pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Records the resolved configuration, seed included, next to the outputs of
/// `command` as `<command>.config.toml`.
pub fn write_config(dir: &Path, command: &str, config: &ExperimentConfig) -> anyhow::Result<PathBuf> {
    let mut resolved = config.clone();
    resolved.seed = Some(config.seed());
    let path = dir.join(format!("{command}.config.toml"));
    fs::write(&path, resolved.to_toml()?).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}
