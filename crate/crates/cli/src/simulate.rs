use std::fs;
use std::path::Path;

use anyhow::Context;
use fwdest::config::ConfigDocument;
use fwdest::harness::{run_experiment, ExperimentConfig, ExperimentOutput, PayoffMode};
use fwdest::report::{metrics_csv, tails_csv, CheckRecord, RunManifest};

use crate::{invalid, runtime, Failure, Outcome};

pub(crate) fn load_config(path: &Path) -> Result<ConfigDocument, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))
        .map_err(runtime)?;
    ConfigDocument::from_json(&text).map_err(invalid)
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn run(config: &Path, out: &Path, wide: bool, seed: Option<u64>, workers: Option<usize>) -> Outcome {
    let started = now();
    let mut doc = load_config(config)?;
    let section = doc
        .experiment
        .as_mut()
        .ok_or_else(|| invalid(anyhow::anyhow!("invalid experiment: section is missing")))?;
    if let Some(seed) = seed {
        section.base_seed = seed;
    }
    if let Some(workers) = workers {
        section.workers = workers;
    }
    let cfg = doc.experiment_config().map_err(invalid)?;
    let output = run_experiment(&cfg).map_err(runtime)?;

    fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(runtime)?;
    let write = |name: &str, body: &str| {
        let path = out.join(name);
        fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))
    };
    write("metrics.csv", &metrics_csv(&output, cfg.process.alphabet(), wide)).map_err(runtime)?;
    write("tails.csv", &tails_csv(&output.tails)).map_err(runtime)?;

    let checks = output_checks(&cfg, &output);
    let config_echo = serde_json::to_value(&doc).map_err(runtime)?;
    let mut manifest = RunManifest::new(env!("CARGO_PKG_VERSION"), config_echo);
    manifest.started_at = started;
    manifest.checks = checks.clone();
    manifest.finished_at = now();
    let json = serde_json::to_string_pretty(&manifest).map_err(runtime)?;
    write("manifest.json", &(json + "\n")).map_err(runtime)?;

    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c.status != "pass")
        .map(|c| c.name.as_str())
        .collect();
    println!("wrote {} metric rows to {}", output.rows.len(), out.display());
    if !failed.is_empty() {
        return Err(runtime(anyhow::anyhow!("output checks failed: {}", failed.join(", "))));
    }
    Ok(())
}

/// Sanity checks on the produced rows, recorded in the manifest.
fn output_checks(cfg: &ExperimentConfig, output: &ExperimentOutput) -> Vec<CheckRecord> {
    let bound = match &cfg.payoff {
        PayoffMode::Scalar(g) => g.max() - g.min(),
        PayoffMode::Distribution => 1.0,
    };
    let bounded = output
        .rows
        .iter()
        .all(|r| r.abs_error >= 0.0 && r.abs_error <= bound + 1e-12);
    // consecutive grid points n < m: the running sum must not decrease
    let mut monotone = true;
    for pair in output.rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.replicate == b.replicate {
            let (sa, sb) = (a.cesaro_avg * a.n as f64, b.cesaro_avg * b.n as f64);
            monotone &= sb + 1e-9 * sb.max(1.0) >= sa;
        }
    }
    let status = |ok: bool| if ok { "pass" } else { "fail" }.to_string();
    vec![
        CheckRecord {
            name: "error_bound".into(),
            status: status(bounded),
        },
        CheckRecord {
            name: "cesaro_running_sum".into(),
            status: status(monotone),
        },
    ]
}
