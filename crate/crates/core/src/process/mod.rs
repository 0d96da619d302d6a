//! Stationary ergodic sources with exactly computable conditional laws.
//!
//! Three families are supported, each with an exact predictive oracle for
//! `P(X_{n+1} = . | X_0..=X_n)`:
//!
//! * i.i.d. symbols,
//! * order-`k` Markov chains (conditionals depend on the last `k` symbols
//!   only, so they are continuous in the `d*` metric),
//! * hidden Markov models, filtered exactly by the forward recursion.
//!
//! Every trajectory starts from the stationary law (of the `k`-block chain,
//! resp. the hidden chain), so the generated segment is stationary from
//! `X_0` on without burn-in.

mod oracle;
mod sampler;
mod stationary;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, SymbolSequence};
use crate::error::{Error, Result};

pub use oracle::{oracle_conditional, oracle_payoff_expectation, Oracle};
pub use sampler::{Sampler, Trajectory};
pub use stationary::{stationary_distribution, RESIDUAL_TOLERANCE, ROW_TOLERANCE};

use stationary::{check_stochastic, SparseChain};

/// A generative model. Matrices are row-major.
///
/// For `Markov`, row `r` of `transitions` is the law of the next symbol given
/// the context `(x_{n-k+1}, ..., x_n)` whose base-`|X|` encoding, oldest
/// symbol most significant, is `r`. For binary order 2 the rows are the
/// contexts `00, 01, 10, 11` in that order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessSpec {
    Iid {
        probs: Vec<f64>,
    },
    Markov {
        order: usize,
        transitions: Vec<Vec<f64>>,
    },
    Hidden {
        transitions: Vec<Vec<f64>>,
        emissions: Vec<Vec<f64>>,
    },
}

/// A validated source: the spec plus the stationary law of its state chain.
#[derive(Clone, Debug)]
pub struct Process {
    alphabet: Alphabet,
    spec: ProcessSpec,
    /// Stationary law of the `k`-block chain (Markov) or hidden chain (Hidden);
    /// the symbol law itself for Iid.
    stationary: Vec<f64>,
}

const MAX_MARKOV_STATES: usize = 1 << 20;

impl Process {
    pub fn new(alphabet: Alphabet, spec: ProcessSpec) -> Result<Self> {
        let a = alphabet.size();
        let stationary = match &spec {
            ProcessSpec::Iid { probs } => {
                check_stochastic(std::slice::from_ref(probs), a, "process.probs").map_err(|e| match e {
                    Error::InvalidSpec { reason, .. } => Error::spec("process.probs", reason),
                    other => other,
                })?;
                probs.clone()
            }
            ProcessSpec::Markov { order, transitions } => {
                if *order == 0 {
                    return Err(Error::spec(
                        "process.order",
                        "must be >= 1 (use kind \"iid\" for order 0)",
                    ));
                }
                let states = (a as u64)
                    .checked_pow(*order as u32)
                    .filter(|&s| s as usize <= MAX_MARKOV_STATES)
                    .ok_or_else(|| Error::spec("process.order", format!("{a}^{order} contexts is too many")))?
                    as usize;
                if transitions.len() != states {
                    return Err(Error::spec(
                        "process.transitions",
                        format!("expected {states} rows ({a}^{order}), got {}", transitions.len()),
                    ));
                }
                check_stochastic(transitions, a, "process.transitions")?;
                let chain = block_chain(transitions, a, states);
                if let Some(defect) = chain.ergodicity_defect() {
                    return Err(Error::spec(
                        "process.transitions",
                        format!("induced {order}-block {defect}"),
                    ));
                }
                chain.stationary()?
            }
            ProcessSpec::Hidden { transitions, emissions } => {
                let s = transitions.len();
                check_stochastic(transitions, s, "process.transitions")?;
                if emissions.len() != s {
                    return Err(Error::spec(
                        "process.emissions",
                        format!("expected {s} rows (one per hidden state), got {}", emissions.len()),
                    ));
                }
                check_stochastic(emissions, a, "process.emissions")?;
                let chain = SparseChain::from_dense(transitions);
                if let Some(defect) = chain.ergodicity_defect() {
                    return Err(Error::spec("process.transitions", format!("hidden {defect}")));
                }
                chain.stationary()?
            }
        };
        Ok(Process {
            alphabet,
            spec,
            stationary,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }

    /// Stationary law of the underlying state chain.
    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// A fresh predictive oracle with no observations.
    pub fn oracle(&self) -> Oracle<'_> {
        Oracle::new(self)
    }

    pub fn sampler(&self, seed: u64) -> Sampler<'_> {
        Sampler::new(self, seed)
    }

    /// Stationary law of `X_0`.
    pub fn marginal(&self) -> Vec<f64> {
        self.oracle().predictive()
    }

    /// `P(X_0..X_{len-1} = block)` by the chain rule over the oracle.
    pub fn block_probability(&self, block: &[u8]) -> Result<f64> {
        let mut oracle = self.oracle();
        let mut p = 1.0;
        for &x in block {
            self.alphabet.check(x)?;
            p *= oracle.predictive()[x as usize];
            if p == 0.0 {
                return Ok(0.0);
            }
            oracle.observe(x)?;
        }
        Ok(p)
    }

    /// Stationary law of all `len`-blocks, indexed by their base-`|X|`
    /// encoding with the first symbol most significant.
    pub fn block_law(&self, len: usize) -> Result<Vec<f64>> {
        let a = self.alphabet.size();
        let cells = (a as u64)
            .checked_pow(len as u32)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::domain(format!("{a}^{len} blocks is too many to tabulate")))?
            as usize;
        let mut block = vec![0u8; len];
        (0..cells)
            .map(|code| {
                let mut c = code;
                for slot in block.iter_mut().rev() {
                    *slot = (c % a) as u8;
                    c /= a;
                }
                self.block_probability(&block)
            })
            .collect()
    }

    /// A trajectory `X_0..=X_horizon` with exact conditionals at `eval` points.
    pub fn generate(&self, seed: u64, horizon: usize, eval: &[usize]) -> Result<Trajectory> {
        Trajectory::generate(self, seed, horizon, eval)
    }

    pub(crate) fn check_history(&self, history: &SymbolSequence) -> Result<()> {
        if history.alphabet().size() != self.alphabet.size() {
            return Err(Error::domain("history alphabet does not match the process"));
        }
        Ok(())
    }
}

/// The chain on `k`-blocks induced by an order-`k` transition table.
fn block_chain(transitions: &[Vec<f64>], a: usize, states: usize) -> SparseChain {
    SparseChain {
        succ: transitions
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let shifted = (s * a) % states;
                row.iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(x, &p)| (shifted + x, p))
                    .collect()
            })
            .collect(),
    }
}
