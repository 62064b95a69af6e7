//! Parallel Monte-Carlo execution.
//!
//! Each run owns a seed derived from `(master_seed, mode, run_index)` and
//! outcomes are collected in run-index order, so the artifacts are identical
//! whatever the thread count.

use rayon::iter::{IntoParallelIterator, ParallelIterator};
use thiserror::Error;

use rescue_core::mcs::{self, ResultSet, RunOutcome};
use rescue_core::scenario::Scenario;
use rescue_core::search::SearchMethod;
use rescue_core::sro::{SroEngine, SroError};
use rescue_core::uas::{UasEngine, UasError};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("{0}")]
    Sro(#[from] SroError),
    #[error("{0}")]
    Uas(#[from] UasError),
    #[error("{0}")]
    Mcs(#[from] mcs::McsError),
    #[error("cannot build thread pool: {0}")]
    Pool(String),
}

impl RunnerError {
    /// True for problems with the scenario or invocation (exit code 2
    /// territory) as opposed to environmental failures (exit code 3).
    pub fn is_validation(&self) -> bool {
        !matches!(self, RunnerError::Pool(_))
    }
}

/// Evaluate `run` for indices `0..n_runs` on `threads` workers (0 = one per
/// core) and aggregate into a [`ResultSet`].
pub fn run_parallel<F>(
    run: F,
    n_runs: u64,
    threads: usize,
    bin_width_s: f64,
) -> Result<(Vec<RunOutcome>, ResultSet), RunnerError>
where
    F: Fn(u64) -> RunOutcome + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunnerError::Pool(e.to_string()))?;
    let outcomes: Vec<RunOutcome> =
        pool.install(|| (0..n_runs).into_par_iter().map(run).collect());
    let results = mcs::summarize(&outcomes, bin_width_s)?;
    Ok((outcomes, results))
}

/// Boat-model simulation (parallel version of the serial library call).
pub fn run_sro(
    scenario: &Scenario,
    n_runs: u64,
    master_seed: u64,
    bin_width_s: f64,
    threads: usize,
) -> Result<(Vec<RunOutcome>, ResultSet), RunnerError> {
    let engine = SroEngine::build(scenario)?;
    run_parallel(|i| engine.run(master_seed, i), n_runs, threads, bin_width_s)
}

/// UAV-fleet simulation (parallel version of the serial library call).
pub fn run_uas(
    scenario: &Scenario,
    method: SearchMethod,
    n_runs: u64,
    master_seed: u64,
    bin_width_s: f64,
    threads: usize,
) -> Result<(Vec<RunOutcome>, ResultSet), RunnerError> {
    let engine = UasEngine::build(scenario, method)?;
    run_parallel(|i| engine.run(master_seed, i), n_runs, threads, bin_width_s)
}
