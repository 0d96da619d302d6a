//! Monte Carlo consistency experiments and the recurrence-time checks.
//!
//! Replicates are independent: replicate `r` uses the seed
//! [`crate::rng::derive_seed`]`(base_seed, r)` and owns its own sampler,
//! estimator and oracle. Results are collected in replicate order, so the
//! output does not depend on the worker count.

mod experiment;
mod lemmas;
pub mod stats;

use serde::Serialize;

pub use experiment::{
    default_eval_grid, run_experiment, ExperimentConfig, ExperimentOutput, MetricsRow, PayoffMode, TailEstimate, Value,
};
pub use lemmas::{
    check_kappa_divergence, check_lemma_resampling, check_return_time_bound, KappaLevel, KappaReport, ResamplingReport,
    ReturnTimeReport,
};

/// Outcome of a statistical check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Too few usable samples to decide.
    Inconclusive,
    /// The check's hypotheses do not hold, so it was not run.
    Skipped,
}

impl CheckStatus {
    pub fn is_failure(self) -> bool {
        self == CheckStatus::Fail
    }
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inconclusive => "inconclusive",
            CheckStatus::Skipped => "skipped",
        })
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub(crate) fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> crate::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| crate::Error::domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}
