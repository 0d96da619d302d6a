use crate::alphabet::SymbolSequence;
use crate::error::{Error, Result};
use crate::rng::SimRng;

use super::{Process, ProcessSpec};

/// Infinite stream of symbols from a stationary source.
///
/// Draw order (frozen): Iid draws one categorical per symbol. Markov draws the
/// initial `k`-block from the stationary block law with one categorical,
/// emits it oldest first, then one categorical per symbol. Hidden draws the
/// initial hidden state, then per step one emission followed by one hidden
/// transition.
#[derive(Clone, Debug)]
pub struct Sampler<'a> {
    process: &'a Process,
    rng: SimRng,
    pending: Vec<u8>,
    recent: usize,
    hidden: Option<usize>,
    started: bool,
}

impl<'a> Sampler<'a> {
    pub(super) fn new(process: &'a Process, seed: u64) -> Self {
        Sampler {
            process,
            rng: SimRng::new(seed),
            pending: Vec::new(),
            recent: 0,
            hidden: None,
            started: false,
        }
    }

    fn start(&mut self) {
        self.started = true;
        let a = self.process.alphabet().size();
        match self.process.spec() {
            ProcessSpec::Iid { .. } => {}
            ProcessSpec::Markov { order, .. } => {
                let block = self.rng.categorical(self.process.stationary());
                self.recent = block;
                let mut c = block;
                let mut symbols = vec![0u8; *order];
                for slot in symbols.iter_mut().rev() {
                    *slot = (c % a) as u8;
                    c /= a;
                }
                symbols.reverse();
                self.pending = symbols;
            }
            ProcessSpec::Hidden { .. } => {
                self.hidden = Some(self.rng.categorical(self.process.stationary()));
            }
        }
    }
}

impl Iterator for Sampler<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if !self.started {
            self.start();
        }
        let a = self.process.alphabet().size();
        let x = match self.process.spec() {
            ProcessSpec::Iid { probs } => self.rng.categorical(probs),
            ProcessSpec::Markov { transitions, .. } => {
                if let Some(x) = self.pending.pop() {
                    return Some(x);
                }
                let states = transitions.len();
                let x = self.rng.categorical(&transitions[self.recent]);
                self.recent = (self.recent * a) % states + x;
                x
            }
            ProcessSpec::Hidden { transitions, emissions } => {
                let s = self.hidden.expect("initial hidden state drawn");
                let x = self.rng.categorical(&emissions[s]);
                self.hidden = Some(self.rng.categorical(&transitions[s]));
                x
            }
        };
        Some(x as u8)
    }
}

/// A generated segment `X_0..=X_horizon` and the exact conditional law of
/// `X_{n+1}` at each requested `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub seq: SymbolSequence,
    pub oracle_conditionals: Vec<(usize, Vec<f64>)>,
    pub rng_seed: u64,
}

impl Trajectory {
    pub(super) fn generate(process: &Process, seed: u64, horizon: usize, eval: &[usize]) -> Result<Self> {
        if let Some(&n) = eval.iter().find(|&&n| n > horizon) {
            return Err(Error::domain(format!("evaluation point {n} exceeds horizon {horizon}")));
        }
        let mut wanted: Vec<usize> = eval.to_vec();
        wanted.sort_unstable();
        wanted.dedup();
        let mut seq = SymbolSequence::with_capacity(process.alphabet().clone(), horizon + 1);
        let mut oracle = process.oracle();
        let mut conditionals = Vec::with_capacity(wanted.len());
        let mut next_eval = wanted.iter().peekable();
        for (n, x) in process.sampler(seed).take(horizon + 1).enumerate() {
            seq.push(x)?;
            oracle.observe(x)?;
            if next_eval.peek() == Some(&&n) {
                next_eval.next();
                conditionals.push((n, oracle.predictive()));
            }
        }
        Ok(Trajectory {
            seq,
            oracle_conditionals: conditionals,
            rng_seed: seed,
        })
    }
}
