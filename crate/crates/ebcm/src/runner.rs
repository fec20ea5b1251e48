//! Parallel execution of sweep points.

use ebcm_core::experiments::{run, run_point, ExperimentConfig, PointOutput};
use rayon::prelude::*;

use crate::CliError;

/// Runs every sweep point, spreading independent points over a worker pool.
///
/// Results come back in sweep order whatever the completion order. With
/// `reset_detectors = false` the points share detector state and run serially.
pub fn run_points(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<PointOutput>, CliError> {
    cfg.validate()?;
    if !cfg.reset_detectors || cfg.points() == 1 {
        return Ok(run(cfg)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))?;
    let points = pool.install(|| {
        (0..cfg.points())
            .into_par_iter()
            .map(|i| run_point(cfg, i, None).map(|(p, _)| p))
            .collect::<ebcm_core::Result<Vec<_>>>()
    })?;
    Ok(points)
}
