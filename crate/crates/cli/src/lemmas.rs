use std::path::Path;

use anyhow::anyhow;
use fwdest::config::ConfigDocument;
use fwdest::harness::{
    check_kappa_divergence, check_lemma_resampling, check_return_time_bound, default_eval_grid, CheckStatus,
};
use fwdest::report::fmt_num;

use crate::simulate::load_config;
use crate::{invalid, runtime, Outcome};

pub fn run(config: Option<&Path>, seed: Option<u64>, workers: Option<usize>) -> Outcome {
    let doc = match config {
        Some(path) => load_config(path)?,
        None => ConfigDocument::fair_coin(),
    };
    let process = doc.process().map_err(invalid)?;
    doc.schedules.validate().map_err(invalid)?;
    let mut sec = doc.lemmas.clone().unwrap_or_default();
    if let Some(seed) = seed {
        sec.base_seed = seed;
    }
    if let Some(workers) = workers {
        sec.workers = workers;
    }
    let field = |name: &'static str| move |e: fwdest::Error| invalid(anyhow!("invalid lemmas.{name}: {e}"));
    let mut statuses = Vec::new();

    let r = &sec.resampling;
    let rep = check_lemma_resampling(
        &process,
        r.k,
        r.j,
        r.n,
        r.replicates,
        r.block_len,
        sec.base_seed,
        sec.workers,
    )
    .map_err(field("resampling"))?;
    println!(
        "resampling: k={} j={} n={} usable={}/{} chi2={} dof={} critical={} -> {}",
        rep.k,
        rep.j,
        rep.n,
        rep.usable,
        rep.replicates,
        fmt_num(rep.statistic),
        rep.dof,
        fmt_num(rep.critical),
        rep.status
    );
    statuses.push(("resampling", rep.status));

    let kap = &sec.kappa;
    let grid = kap.eval_grid.clone().unwrap_or_else(|| default_eval_grid(kap.horizon));
    let rep = check_kappa_divergence(
        &process,
        &doc.schedules,
        kap.horizon,
        &grid,
        kap.replicates,
        sec.base_seed,
        sec.workers,
    )
    .map_err(field("kappa"))?;
    for level in &rep.levels {
        println!(
            "kappa: n={} K(n)={} min={} median={} at_cap={}",
            level.n,
            level.context_cap,
            level.min,
            fmt_num(level.median),
            fmt_num(level.at_cap)
        );
    }
    println!("kappa: {} -> {}", rep.note, rep.status);
    statuses.push(("kappa", rep.status));

    let rt = &sec.return_time;
    let block: Vec<u8> = match &rt.block {
        Some(names) => names
            .iter()
            .map(|s| {
                process
                    .alphabet()
                    .index_of(s)
                    .ok_or_else(|| invalid(anyhow!("invalid lemmas.return_time.block: unknown symbol {s:?}")))
            })
            .collect::<Result<_, _>>()?,
        None => vec![(process.alphabet().size() - 1) as u8],
    };
    let rep = check_return_time_bound(&process, rt.n, rt.d, rt.replicates, &block, sec.base_seed, sec.workers)
        .map_err(field("return_time"))?;
    println!(
        "return_time: n={} D={} events={}/{} frequency={} bound={} -> {}",
        rep.n,
        rep.d,
        rep.events,
        rep.replicates,
        fmt_num(rep.frequency),
        fmt_num(rep.bound),
        rep.status
    );
    statuses.push(("return_time", rep.status));

    for (name, status) in &statuses {
        if matches!(status, CheckStatus::Inconclusive | CheckStatus::Skipped) {
            eprintln!("warning: {name} check {status}");
        }
    }
    let failed: Vec<&str> = statuses
        .iter()
        .filter(|(_, s)| s.is_failure())
        .map(|(n, _)| *n)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(runtime(anyhow!("failed checks: {}", failed.join(", "))))
    }
}
