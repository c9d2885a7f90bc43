//! Parameter sweeps, run in parallel and reported in input order.

use std::path::Path;

use rayon::prelude::*;

use crate::config::{RunConfig, SweepTask};
use crate::error::CliError;
use crate::output::num;
use crate::{rst, transient};

/// Worker count from `PEM_SIM_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("PEM_SIM_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("PEM_SIM_THREADS = {v:?}: expected a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// One config per sweep value, in order.
pub fn point_configs(cfg: &RunConfig) -> Result<Vec<(f64, RunConfig)>, CliError> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("sweep_values is not set".into()))?;
    sweep
        .values
        .iter()
        .map(|&v| {
            let mut c = cfg.clone();
            c.set(&sweep.key, &num(v))?;
            c.validate()?;
            Ok((v, c))
        })
        .collect()
}

/// Applies `f` to every point on a pool capped by `PEM_SIM_THREADS`.
/// Results keep the order of the sweep values.
pub fn map_points<R: Send>(
    points: &[(f64, RunConfig)],
    f: impl Fn(f64, &RunConfig) -> R + Sync,
) -> Result<Vec<R>, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|(v, c)| f(*v, c)).collect()))
}

pub fn run(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let task = cfg.sweep.as_ref().map(|s| s.task).ok_or_else(|| CliError::Config("sweep_values is not set".into()))?;
    match task {
        SweepTask::Rst => rst::run(cfg, out),
        SweepTask::Transient => transient::run_sweep(cfg, out),
    }
}
