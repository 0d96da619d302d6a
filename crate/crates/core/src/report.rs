//! CSV and manifest output.
//!
//! Numbers are printed with 12 significant digits in the shortest of fixed
//! or scientific notation (the `%.12g` rule, with Rust-style exponents such
//! as `1e-5`).

use std::fmt::Write;

use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::estimator::DistributionEstimate;
use crate::harness::{ExperimentOutput, MetricsRow, TailEstimate, Value};

/// Bumped whenever a CSV column is added, removed or reordered.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const METRICS_COLUMNS: [&str; 9] = [
    "replicate",
    "n",
    "kappa",
    "lambda",
    "abstained",
    "estimate_or_tv",
    "oracle_summary",
    "abs_error",
    "cesaro_avg",
];

pub const TAILS_COLUMNS: [&str; 5] = ["n", "epsilon", "fraction", "wilson_halfwidth", "replicates"];

const SIGNIFICANT: i32 = 12;

/// `x` with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (SIGNIFICANT - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT).contains(&exp) {
        let decimals = (SIGNIFICANT - 1 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn summary(row: &MetricsRow) -> (f64, f64) {
    match (&row.estimate, &row.oracle) {
        (Value::Scalar(e), Value::Scalar(o)) => (*e, *o),
        // vector rows: the TV error and the probability of the oracle's mode
        (_, Value::Vector(o)) => (row.abs_error, o.iter().copied().fold(0.0, f64::max)),
        (_, Value::Scalar(o)) => (row.abs_error, *o),
    }
}

/// `metrics.csv`. With `wide`, vector rows gain `est_<sym>` and
/// `oracle_<sym>` columns for each symbol.
pub fn metrics_csv(output: &ExperimentOutput, alphabet: &Alphabet, wide: bool) -> String {
    let vector = output.rows.iter().any(|r| matches!(r.estimate, Value::Vector(_)));
    let wide = wide && vector;
    let mut out = METRICS_COLUMNS.join(",");
    if wide {
        for prefix in ["est", "oracle"] {
            for s in alphabet.symbols() {
                let _ = write!(out, ",{prefix}_{s}");
            }
        }
    }
    out.push('\n');
    for row in &output.rows {
        let (est, oracle) = summary(row);
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.replicate,
            row.n,
            row.kappa,
            row.lambda,
            row.abstained,
            fmt_num(est),
            fmt_num(oracle),
            fmt_num(row.abs_error),
            fmt_num(row.cesaro_avg)
        );
        if wide {
            for v in [&row.estimate, &row.oracle] {
                if let Value::Vector(p) = v {
                    for x in p {
                        let _ = write!(out, ",{}", fmt_num(*x));
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn tails_csv(tails: &[TailEstimate]) -> String {
    let mut out = TAILS_COLUMNS.join(",");
    out.push('\n');
    for t in tails {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            t.n,
            fmt_num(t.epsilon),
            fmt_num(t.fraction),
            fmt_num(t.wilson_halfwidth),
            t.replicates
        );
    }
    out
}

pub fn estimate_header(alphabet: &Alphabet) -> String {
    let mut out = String::from("n,kappa,lambda,abstained");
    for s in alphabet.symbols() {
        let _ = write!(out, ",p_{s}");
    }
    out
}

pub fn estimate_line(n: usize, d: &DistributionEstimate) -> String {
    let mut out = format!("{n},{},{},{}", d.kappa, d.lambda, d.abstained);
    for p in &d.probs {
        let _ = write!(out, ",{}", fmt_num(*p));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: String,
}

/// Written next to every CSV so the file can be traced to its inputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub rng_algorithm: String,
    pub csv_schema_version: u32,
    pub metrics_columns: Vec<String>,
    pub tails_columns: Vec<String>,
    pub config: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
    pub checks: Vec<CheckRecord>,
}

impl RunManifest {
    pub fn new(tool_version: &str, config: serde_json::Value) -> Self {
        RunManifest {
            tool_version: tool_version.to_string(),
            rng_algorithm: crate::rng::RNG_ALGORITHM.to_string(),
            csv_schema_version: CSV_SCHEMA_VERSION,
            metrics_columns: METRICS_COLUMNS.iter().map(|s| s.to_string()).collect(),
            tails_columns: TAILS_COLUMNS.iter().map(|s| s.to_string()).collect(),
            config,
            started_at: String::new(),
            finished_at: String::new(),
            checks: Vec::new(),
        }
    }
}
