//! Statistical checks of the recurrence-time lemmas.

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::SymbolSequence;
use crate::error::{Error, Result};
use crate::estimator::recurrence_times;
use crate::index::{BlockKey, StreamingEstimator};
use crate::process::Process;
use crate::rng::derive_seed;
use crate::schedule::{Hypotheses, Schedules};

use super::stats::{chi_square_quantile, median, pearson};
use super::{in_pool, CheckStatus};

/// Samples needed before the resampling check is decided.
pub const MIN_USABLE_REPLICATES: usize = 50;
const SIGNIFICANCE: f64 = 0.999;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResamplingReport {
    pub k: usize,
    pub j: usize,
    pub n: usize,
    pub block_len: usize,
    pub replicates: usize,
    pub usable: usize,
    /// Share of replicates where `tau^k_j(n)` falls outside the segment.
    pub missing_fraction: f64,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub status: CheckStatus,
}

/// Compares the law of the block `X_{n-tau+1}..X_{n-tau+block_len}`, where
/// `tau = tau^k_j(n)`, with the stationary law of `X_1..X_{block_len}`.
///
/// Each replicate generates `X_0..X_{n+block_len-1}`; the recurrence time is
/// searched in `X_0..=X_n` only, and replicates without a `j`-th in-segment
/// recurrence are excluded and counted.
#[allow(clippy::too_many_arguments)]
pub fn check_lemma_resampling(
    process: &Process,
    k: usize,
    j: usize,
    n: usize,
    replicates: usize,
    block_len: usize,
    base_seed: u64,
    workers: usize,
) -> Result<ResamplingReport> {
    if k == 0 || j == 0 {
        return Err(Error::domain("resampling check needs k >= 1 and j >= 1"));
    }
    if k > n + 1 {
        return Err(Error::domain(format!(
            "block length {k} exceeds the segment X_0..=X_{n}"
        )));
    }
    if !(1..=3).contains(&block_len) {
        return Err(Error::domain("resampled block length must be 1, 2 or 3"));
    }
    let a = process.alphabet().size();
    let draws: Vec<Option<u64>> = in_pool(workers, || {
        (0..replicates)
            .into_par_iter()
            .map(|r| -> Result<Option<u64>> {
                let seed = derive_seed(base_seed, r as u64);
                let data: Vec<u8> = process.sampler(seed).take(n + block_len).collect();
                let seq = SymbolSequence::from_indices(process.alphabet().clone(), data)?;
                let taus = recurrence_times(&seq, n, k, j)?;
                Ok(taus.get(j - 1).map(|&tau| {
                    let start = n - tau + 1;
                    BlockKey::encode(&seq.as_slice()[start..start + block_len], a).code
                }))
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let expected = process.block_law(block_len)?;
    let mut observed = vec![0u64; expected.len()];
    for code in draws.iter().flatten() {
        observed[*code as usize] += 1;
    }
    let usable = draws.iter().flatten().count();
    let (statistic, dof) = pearson(&observed, &expected);
    let critical = if dof == 0 {
        0.0
    } else {
        chi_square_quantile(dof, SIGNIFICANCE)
    };
    let status = if usable < MIN_USABLE_REPLICATES {
        CheckStatus::Inconclusive
    } else if statistic <= critical {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(ResamplingReport {
        k,
        j,
        n,
        block_len,
        replicates,
        usable,
        missing_fraction: (replicates - usable) as f64 / replicates.max(1) as f64,
        observed,
        expected,
        statistic,
        dof,
        critical,
        status,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaLevel {
    pub n: usize,
    pub context_cap: usize,
    pub min: usize,
    pub median: f64,
    /// Share of replicates with `kappa_n == K(n)`.
    pub at_cap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaReport {
    pub replicates: usize,
    pub levels: Vec<KappaLevel>,
    pub decided_at: Option<usize>,
    pub status: CheckStatus,
    pub note: String,
}

/// Share of replicates that must reach `kappa_n = K(n)`.
pub const KAPPA_PASS_FRACTION: f64 = 0.95;

/// Records `kappa_n` on the grid. Passes when, at the largest grid point
/// with `K(n) >= 2`, more than 95% of replicates have `kappa_n = K(n)`.
pub fn check_kappa_divergence(
    process: &Process,
    schedules: &Schedules,
    horizon: usize,
    eval_grid: &[usize],
    replicates: usize,
    base_seed: u64,
    workers: usize,
) -> Result<KappaReport> {
    if let Hypotheses::Violated(reason) = schedules.divergence_hypotheses() {
        return Ok(KappaReport {
            replicates,
            levels: vec![],
            decided_at: None,
            status: CheckStatus::Skipped,
            note: format!("hypothesis violation: {reason}"),
        });
    }
    if replicates == 0 {
        return Err(Error::domain("kappa check needs at least one replicate"));
    }
    if let Some(&n) = eval_grid.iter().find(|&&n| n == 0 || n > horizon) {
        return Err(Error::domain(format!("evaluation point {n} is outside 1..={horizon}")));
    }
    let mut grid = eval_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let a = process.alphabet().size();
    let per_replicate: Vec<Vec<usize>> = in_pool(workers, || {
        (0..replicates)
            .into_par_iter()
            .map(|r| -> Result<Vec<usize>> {
                let seed = derive_seed(base_seed, r as u64);
                let mut est = StreamingEstimator::new(process.alphabet().clone(), *schedules, horizon)?;
                let mut kappas = Vec::with_capacity(grid.len());
                let mut next = grid.iter().peekable();
                for (n, x) in process.sampler(seed).take(horizon + 1).enumerate() {
                    est.push(x)?;
                    if next.peek() == Some(&&n) {
                        next.next();
                        kappas.push(est.kappa()?);
                    }
                }
                Ok(kappas)
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut levels = Vec::with_capacity(grid.len());
    for (i, &n) in grid.iter().enumerate() {
        let cap = schedules.context_len(n as u64, a)?;
        let values: Vec<usize> = per_replicate.iter().map(|v| v[i]).collect();
        let as_f64: Vec<f64> = values.iter().map(|&v| v as f64).collect();
        levels.push(KappaLevel {
            n,
            context_cap: cap,
            min: values.iter().copied().min().unwrap_or(0),
            median: median(&as_f64),
            at_cap: values.iter().filter(|&&v| v == cap).count() as f64 / replicates as f64,
        });
    }
    let decisive = levels.iter().rev().find(|l| l.context_cap >= 2);
    let (status, decided_at, note) = match decisive {
        None => (
            CheckStatus::Inconclusive,
            None,
            "no grid point has K(n) >= 2; raise the horizon".to_string(),
        ),
        Some(l) => {
            let status = if l.at_cap > KAPPA_PASS_FRACTION {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            };
            (
                status,
                Some(l.n),
                format!(
                    "at n = {} a share {:.4} of replicates reached kappa = K(n) = {}",
                    l.n, l.at_cap, l.context_cap
                ),
            )
        }
    };
    Ok(KappaReport {
        replicates,
        levels,
        decided_at,
        status,
        note,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnTimeReport {
    pub n: usize,
    pub d: usize,
    pub block: Vec<u8>,
    pub replicates: usize,
    pub events: usize,
    pub frequency: f64,
    pub bound: f64,
    pub status: CheckStatus,
}

/// Estimates `P(X_0..X_{k-1} = block and fewer than d of the shifts
/// i = 0..n-1 start an occurrence of block)` and compares it with `d/n`
/// plus three binomial standard errors.
pub fn check_return_time_bound(
    process: &Process,
    n: usize,
    d: usize,
    replicates: usize,
    block: &[u8],
    base_seed: u64,
    workers: usize,
) -> Result<ReturnTimeReport> {
    if n == 0 || d == 0 {
        return Err(Error::domain("return-time check needs n >= 1 and D >= 1"));
    }
    if replicates == 0 {
        return Err(Error::domain("return-time check needs at least one replicate"));
    }
    let k = block.len();
    if k == 0 || k > n + 1 {
        return Err(Error::domain(format!("block length must lie in 1..={}", n + 1)));
    }
    if process.block_probability(block)? == 0.0 {
        return Err(Error::domain(
            "the block has stationary probability 0, so the event is vacuous",
        ));
    }
    let hits: Vec<bool> = in_pool(workers, || {
        (0..replicates)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(base_seed, r as u64);
                let data: Vec<u8> = process.sampler(seed).take(n + k).collect();
                if &data[..k] != block {
                    return false;
                }
                let visits = (0..n).filter(|&i| &data[i..i + k] == block).count();
                visits < d
            })
            .collect()
    })?;
    let events = hits.iter().filter(|&&h| h).count();
    let f = events as f64 / replicates as f64;
    let bound = d as f64 / n as f64 + 3.0 * (f * (1.0 - f) / replicates as f64).sqrt();
    Ok(ReturnTimeReport {
        n,
        d,
        block: block.to_vec(),
        replicates,
        events,
        frequency: f,
        bound,
        status: if f <= bound {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
    })
}
