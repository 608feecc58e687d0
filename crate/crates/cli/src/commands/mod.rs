//! Command implementations.

pub mod fit;
pub mod flow;
pub mod identity;
pub mod sphere_check;
pub mod sweep;

use std::path::{Path, PathBuf};

use solitonlab::CurvatureFn;

use crate::usage;

/// Settings shared by every command.
#[derive(Clone, Debug, Default)]
pub struct Context {
    /// Output directory given on the command line.
    pub out: Option<PathBuf>,
    pub allow_positive_c: bool,
}

impl Context {
    /// Directory for output files; the current directory when none was given.
    pub fn out_dir(&self) -> &Path {
        self.out.as_deref().unwrap_or(Path::new("."))
    }
}

pub(crate) fn parse_f(spec: &str, n: usize) -> anyhow::Result<CurvatureFn> {
    CurvatureFn::parse(spec, n).or_else(|e| usage(format!("curvature function `{spec}`: {e}")))
}
