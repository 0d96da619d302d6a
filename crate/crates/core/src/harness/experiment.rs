use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::StreamingEstimator;
use crate::payoff::PayoffFunction;
use crate::process::Process;
use crate::rng::derive_seed;
use crate::schedule::Schedules;

use super::in_pool;
use super::stats::wilson_halfwidth;

/// What the estimator is scored on.
#[derive(Clone, Debug, PartialEq)]
pub enum PayoffMode {
    /// `|g_n - E[g(X_{n+1}) | X_0..=X_n]|`.
    Scalar(PayoffFunction),
    /// Total-variation distance between estimated and true next-symbol laws.
    Distribution,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub process: Process,
    pub schedules: Schedules,
    pub horizon: usize,
    pub replicates: usize,
    /// Sorted, deduplicated `n` values in `1..=horizon` at which rows are kept.
    pub eval_grid: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub payoff: PayoffMode,
    pub base_seed: u64,
    pub workers: usize,
}

/// Powers of two up to `horizon`, plus `horizon` itself.
pub fn default_eval_grid(horizon: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = std::iter::successors(Some(1usize), |&n| n.checked_mul(2))
        .take_while(|&n| n <= horizon)
        .collect();
    if grid.last() != Some(&horizon) {
        grid.push(horizon);
    }
    grid
}

impl ExperimentConfig {
    pub fn new(process: Process, horizon: usize) -> Self {
        ExperimentConfig {
            process,
            schedules: Schedules::default(),
            horizon,
            replicates: 1,
            eval_grid: default_eval_grid(horizon),
            epsilons: vec![0.05],
            payoff: PayoffMode::Distribution,
            base_seed: 0,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.schedules.validate()?;
        if self.horizon == 0 {
            return Err(Error::spec("experiment.horizon", "must be >= 1"));
        }
        if self.replicates == 0 {
            return Err(Error::spec("experiment.replicates", "must be >= 1"));
        }
        if self.workers == 0 {
            return Err(Error::spec("experiment.workers", "must be >= 1"));
        }
        if self.eval_grid.is_empty() {
            return Err(Error::spec("experiment.eval_grid", "must not be empty"));
        }
        if !self.eval_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::spec("experiment.eval_grid", "must be strictly increasing"));
        }
        if let Some(&n) = self.eval_grid.iter().find(|&&n| n == 0 || n > self.horizon) {
            return Err(Error::spec(
                "experiment.eval_grid",
                format!("{n} is outside 1..={}", self.horizon),
            ));
        }
        let bounded = match &self.payoff {
            PayoffMode::Distribution => true,
            PayoffMode::Scalar(g) => {
                if g.alphabet_size() != self.process.alphabet().size() {
                    return Err(Error::spec("experiment.payoff", "needs one value per alphabet symbol"));
                }
                g.values().iter().all(|&v| v == 0.0 || v == 1.0)
            }
        };
        for (i, &eps) in self.epsilons.iter().enumerate() {
            let ok = eps.is_finite() && eps > 0.0 && (!bounded || eps <= 1.0);
            if !ok {
                return Err(Error::spec(
                    format!("experiment.epsilons[{i}]"),
                    format!("{eps} must lie in (0, 1]"),
                ));
            }
        }
        Ok(())
    }
}

/// An estimate or oracle value: scalar payoff or full next-symbol law.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub replicate: usize,
    pub n: usize,
    pub kappa: usize,
    pub lambda: u64,
    pub abstained: bool,
    pub estimate: Value,
    pub oracle: Value,
    pub abs_error: f64,
    /// `(1/n) * sum_{i<n} abs_error_i`, abstentions included.
    pub cesaro_avg: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailEstimate {
    pub n: usize,
    pub epsilon: f64,
    /// Share of replicates with `abs_error > epsilon` at `n`.
    pub fraction: f64,
    pub wilson_halfwidth: f64,
    pub replicates: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    /// Sorted by replicate, then `n`.
    pub rows: Vec<MetricsRow>,
    /// Sorted by `n`, then epsilon in configuration order.
    pub tails: Vec<TailEstimate>,
}

impl ExperimentOutput {
    /// Rows of all replicates at a given `n`, in replicate order.
    pub fn rows_at(&self, n: usize) -> impl Iterator<Item = &MetricsRow> {
        self.rows.iter().filter(move |r| r.n == n)
    }
}

pub(crate) fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

fn run_replicate(cfg: &ExperimentConfig, replicate: usize) -> Result<Vec<MetricsRow>> {
    let process = &cfg.process;
    let seed = derive_seed(cfg.base_seed, replicate as u64);
    let mut est = StreamingEstimator::new(process.alphabet().clone(), cfg.schedules, cfg.horizon)?;
    let mut oracle = process.oracle();
    let mut rows = Vec::with_capacity(cfg.eval_grid.len());
    let mut grid = cfg.eval_grid.iter().peekable();
    let mut error_sum = 0.0;
    for (n, x) in process.sampler(seed).take(cfg.horizon + 1).enumerate() {
        est.push(x)?;
        oracle.observe(x)?;
        let truth = oracle.predictive();
        let record = grid.peek() == Some(&&n);
        let (error, row) = match &cfg.payoff {
            PayoffMode::Scalar(g) => {
                let r = est.current_estimate(g)?;
                let target = g.expectation(&truth);
                let error = (r.value - target).abs();
                let row = record.then_some((
                    r.kappa,
                    r.lambda,
                    r.abstained,
                    Value::Scalar(r.value),
                    Value::Scalar(target),
                ));
                (error, row)
            }
            PayoffMode::Distribution => {
                let d = est.current_distribution()?;
                let error = total_variation(&d.probs, &truth);
                let row = record.then_some((
                    d.kappa,
                    d.lambda,
                    d.abstained,
                    Value::Vector(d.probs),
                    Value::Vector(truth),
                ));
                (error, row)
            }
        };
        if let Some((kappa, lambda, abstained, estimate, oracle_value)) = row {
            grid.next();
            rows.push(MetricsRow {
                replicate,
                n,
                kappa,
                lambda,
                abstained,
                estimate,
                oracle: oracle_value,
                abs_error: error,
                cesaro_avg: error_sum / n as f64,
            });
        }
        error_sum += error;
    }
    Ok(rows)
}

/// Runs every replicate and aggregates tail fractions on the grid.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let per_replicate: Vec<Vec<MetricsRow>> = in_pool(cfg.workers, || {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| run_replicate(cfg, r))
            .collect::<Result<Vec<_>>>()
    })??;
    let rows: Vec<MetricsRow> = per_replicate.into_iter().flatten().collect();
    let mut tails = Vec::with_capacity(cfg.eval_grid.len() * cfg.epsilons.len());
    for &n in &cfg.eval_grid {
        let errors: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.abs_error).collect();
        for &epsilon in &cfg.epsilons {
            let exceed = errors.iter().filter(|&&e| e > epsilon).count();
            tails.push(TailEstimate {
                n,
                epsilon,
                fraction: exceed as f64 / errors.len() as f64,
                wilson_halfwidth: wilson_halfwidth(exceed, errors.len()),
                replicates: errors.len(),
            });
        }
    }
    Ok(ExperimentOutput { rows, tails })
}
