//! Command-line front end for `solitonlab`: configuration files, experiment
//! orchestration and CSV/JSON output.

// `!(x > 0.0)` style tests also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod surface;

use std::fmt;

pub use args::{Cli, Command};
pub use config::ExperimentConfig;

/// Invalid input detected before any computation. Maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Shorthand for returning a [`UsageError`].
pub fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

/// Exit code for an error returned by [`run`].
pub fn error_exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}

/// Loads the configuration, merges command-line overrides and runs the command.
pub fn run(cli: Cli) -> anyhow::Result<Status> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    let ctx = commands::Context {
        out: cli.out.clone(),
        allow_positive_c: cli.allow_positive_c,
    };
    match cli.command {
        Command::SphereCheck(a) => {
            let section = a.merge(config.sphere_check.take().unwrap_or_default());
            config.sphere_check = Some(section.clone());
            commands::sphere_check::run(&ctx, &config, &section)
        }
        Command::IdentitySuite(a) => {
            let section = a.merge(config.identity_suite.take().unwrap_or_default());
            config.identity_suite = Some(section.clone());
            commands::identity::run(&ctx, &config, &section)
        }
        Command::Flow(a) => {
            let section = a.merge(config.flow.take().unwrap_or_default());
            config.flow = Some(section.clone());
            commands::flow::run(&ctx, &config, &section)
        }
        Command::SweepPinching(a) => {
            let section = a.merge(config.sweep_pinching.take().unwrap_or_default());
            config.sweep_pinching = Some(section.clone());
            commands::sweep::run(&ctx, &config, &section)
        }
        Command::SolitonFit(a) => {
            let section = a.merge(config.soliton_fit.take().unwrap_or_default());
            config.soliton_fit = Some(section.clone());
            commands::fit::run(&ctx, &config, &section)
        }
    }
}
