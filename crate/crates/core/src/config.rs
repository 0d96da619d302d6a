//! The JSON configuration document.
//!
//! ```json
//! {
//!   "process": { "kind": "markov", "alphabet": ["0", "1"], "order": 1,
//!                "transitions": [[0.7, 0.3], [0.3, 0.7]] },
//!   "schedules": { "context": { "log": { "coef": 0.1 } },
//!                  "threshold": { "power": { "exponent": 0.5 } } },
//!   "experiment": { "horizon": 100000, "replicates": 20,
//!                   "payoff": { "indicator": "1" }, "base_seed": 7 },
//!   "lemmas": { "resampling": { "k": 1, "j": 1, "n": 100, "replicates": 5000 } }
//! }
//! ```
//!
//! Numbers must be JSON numbers; quoted decimals are rejected. Parse errors
//! carry the path of the offending field.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::Error;
use crate::harness::{default_eval_grid, ExperimentConfig, PayoffMode};
use crate::payoff::PayoffFunction;
use crate::process::{Process, ProcessSpec};
use crate::schedule::Schedules;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Invalid(#[from] Error),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessSection {
    /// Symbol names; defaults to `"0", "1", ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(flatten)]
    pub model: ProcessSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayoffSpec {
    /// Total-variation scoring of the whole next-symbol law.
    Distribution,
    /// `g = 1{x = symbol}`.
    Indicator(String),
    /// One value per symbol, in alphabet order.
    Values(Vec<f64>),
}

fn default_replicates() -> usize {
    1
}
fn default_workers() -> usize {
    1
}
fn default_epsilons() -> Vec<f64> {
    vec![0.05]
}
fn default_payoff() -> PayoffSpec {
    PayoffSpec::Distribution
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub horizon: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_grid: Option<Vec<usize>>,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_payoff")]
    pub payoff: PayoffSpec,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResamplingSection {
    pub k: usize,
    pub j: usize,
    pub n: usize,
    pub replicates: usize,
    #[serde(default = "default_block_len")]
    pub block_len: usize,
}

fn default_block_len() -> usize {
    1
}

impl Default for ResamplingSection {
    fn default() -> Self {
        ResamplingSection {
            k: 1,
            j: 1,
            n: 100,
            replicates: 5000,
            block_len: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaSection {
    pub horizon: usize,
    pub replicates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_grid: Option<Vec<usize>>,
}

impl Default for KappaSection {
    fn default() -> Self {
        KappaSection {
            horizon: 1 << 21,
            replicates: 20,
            eval_grid: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReturnTimeSection {
    pub n: usize,
    pub d: usize,
    pub replicates: usize,
    /// Symbol names of the block defining the event; defaults to the last symbol.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<Vec<String>>,
}

impl Default for ReturnTimeSection {
    fn default() -> Self {
        ReturnTimeSection {
            n: 100,
            d: 30,
            replicates: 20000,
            block: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaSection {
    #[serde(default)]
    pub resampling: ResamplingSection,
    #[serde(default)]
    pub kappa: KappaSection,
    #[serde(default)]
    pub return_time: ReturnTimeSection,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub process: ProcessSection,
    #[serde(default)]
    pub schedules: Schedules,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSection>,
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    /// The fair-coin document used when no configuration is given.
    pub fn fair_coin() -> Self {
        ConfigDocument {
            process: ProcessSection {
                alphabet: None,
                model: ProcessSpec::Iid { probs: vec![0.5, 0.5] },
            },
            schedules: Schedules::default(),
            experiment: None,
            lemmas: Some(LemmaSection::default()),
        }
    }

    pub fn process(&self) -> Result<Process, Error> {
        let size = match &self.process.model {
            ProcessSpec::Iid { probs } => probs.len(),
            ProcessSpec::Markov { transitions, .. }
            | ProcessSpec::Hidden {
                emissions: transitions, ..
            } => transitions.first().map_or(0, Vec::len),
        };
        let alphabet = match &self.process.alphabet {
            Some(names) => {
                Alphabet::new(names.iter().cloned()).map_err(|e| Error::spec("process.alphabet", e.to_string()))?
            }
            None => Alphabet::numeric(size).map_err(|e| Error::spec("process", e.to_string()))?,
        };
        Process::new(alphabet, self.process.model.clone())
    }

    pub fn experiment_config(&self) -> Result<ExperimentConfig, Error> {
        let section = self
            .experiment
            .as_ref()
            .ok_or_else(|| Error::spec("experiment", "section is missing"))?;
        self.schedules.validate()?;
        let process = self.process()?;
        let payoff = match &section.payoff {
            PayoffSpec::Distribution => PayoffMode::Distribution,
            PayoffSpec::Indicator(name) => {
                let z = process
                    .alphabet()
                    .index_of(name)
                    .ok_or_else(|| Error::spec("experiment.payoff.indicator", format!("unknown symbol {name:?}")))?;
                PayoffMode::Scalar(PayoffFunction::indicator(z, process.alphabet().size())?)
            }
            PayoffSpec::Values(values) => {
                if values.len() != process.alphabet().size() {
                    return Err(Error::spec(
                        "experiment.payoff.values",
                        format!("expected {} values, got {}", process.alphabet().size(), values.len()),
                    ));
                }
                PayoffMode::Scalar(
                    PayoffFunction::new(values.clone())
                        .map_err(|e| Error::spec("experiment.payoff.values", e.to_string()))?,
                )
            }
        };
        let cfg = ExperimentConfig {
            process,
            schedules: self.schedules,
            horizon: section.horizon,
            replicates: section.replicates,
            eval_grid: section
                .eval_grid
                .clone()
                .unwrap_or_else(|| default_eval_grid(section.horizon)),
            epsilons: section.epsilons.clone(),
            payoff,
            base_seed: section.base_seed,
            workers: section.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
