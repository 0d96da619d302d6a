use crate::alphabet::SymbolSequence;
use crate::error::{Error, Result};
use crate::payoff::PayoffFunction;

use super::{Process, ProcessSpec};

#[derive(Clone, Debug)]
enum State {
    Iid,
    /// Last `order` symbols (fewer while the history is short).
    Markov {
        recent: Vec<u8>,
    },
    /// Normalized filter `P(H_n = s | X_0..=X_n)`; `None` before the first symbol.
    Hidden {
        alpha: Option<Vec<f64>>,
    },
}

/// Exact predictive law of the next symbol given everything observed so far.
///
/// Before any observation the predictive law is the stationary law of `X_0`.
#[derive(Clone, Debug)]
pub struct Oracle<'a> {
    process: &'a Process,
    state: State,
    observed: usize,
}

impl<'a> Oracle<'a> {
    pub(super) fn new(process: &'a Process) -> Self {
        let state = match process.spec() {
            ProcessSpec::Iid { .. } => State::Iid,
            ProcessSpec::Markov { order, .. } => State::Markov {
                recent: Vec::with_capacity(*order),
            },
            ProcessSpec::Hidden { .. } => State::Hidden { alpha: None },
        };
        Oracle {
            process,
            state,
            observed: 0,
        }
    }

    pub fn observed(&self) -> usize {
        self.observed
    }

    /// Conditions on one more symbol.
    pub fn observe(&mut self, x: u8) -> Result<()> {
        self.process.alphabet().check(x)?;
        let position = self.observed;
        match (&mut self.state, self.process.spec()) {
            (State::Iid, ProcessSpec::Iid { probs }) => {
                if probs[x as usize] == 0.0 {
                    return Err(Error::ImpossibleHistory { position });
                }
            }
            (State::Markov { recent }, ProcessSpec::Markov { order, .. }) => {
                let feasible = match self.process.spec() {
                    ProcessSpec::Markov { transitions, .. } if recent.len() == *order => {
                        let a = self.process.alphabet().size();
                        let code = recent.iter().fold(0usize, |acc, &s| acc * a + s as usize);
                        transitions[code][x as usize] > 0.0
                    }
                    _ => markov_predictive(self.process, recent)[x as usize] > 0.0,
                };
                if !feasible {
                    return Err(Error::ImpossibleHistory { position });
                }
                if recent.len() == *order {
                    recent.remove(0);
                }
                recent.push(x);
            }
            (State::Hidden { alpha }, ProcessSpec::Hidden { transitions, emissions }) => {
                let prior: Vec<f64> = match alpha {
                    None => self.process.stationary().to_vec(),
                    Some(a) => propagate(a, transitions),
                };
                let mut next: Vec<f64> = prior
                    .iter()
                    .zip(emissions)
                    .map(|(p, row)| p * row[x as usize])
                    .collect();
                let total: f64 = next.iter().sum();
                if total <= 0.0 {
                    return Err(Error::ImpossibleHistory { position });
                }
                next.iter_mut().for_each(|v| *v /= total);
                *alpha = Some(next);
            }
            _ => unreachable!("oracle state matches its process"),
        }
        self.observed += 1;
        Ok(())
    }

    /// `P(X_{n+1} = . | X_0..=X_n)` for the `n + 1` symbols observed so far.
    pub fn predictive(&self) -> Vec<f64> {
        match (&self.state, self.process.spec()) {
            (State::Iid, ProcessSpec::Iid { probs }) => probs.clone(),
            (State::Markov { recent }, _) => markov_predictive(self.process, recent),
            (State::Hidden { alpha }, ProcessSpec::Hidden { transitions, emissions }) => {
                let hidden = match alpha {
                    None => self.process.stationary().to_vec(),
                    Some(a) => propagate(a, transitions),
                };
                let mut out = vec![0.0; self.process.alphabet().size()];
                for (w, row) in hidden.iter().zip(emissions) {
                    for (o, b) in out.iter_mut().zip(row) {
                        *o += w * b;
                    }
                }
                out
            }
            _ => unreachable!("oracle state matches its process"),
        }
    }
}

/// `sum_s alpha(s) A(s, .)`.
fn propagate(alpha: &[f64], transitions: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; alpha.len()];
    for (w, row) in alpha.iter().zip(transitions) {
        for (o, p) in out.iter_mut().zip(row) {
            *o += w * p;
        }
    }
    out
}

/// Order-`k` predictive law given the observed suffix `recent`
/// (`recent.len() <= k`, shorter only at the start of the history).
///
/// With a full context this is a row of the table. With `m < k` observed
/// symbols the unobserved pre-history `x_{-(k-m)}..x_{-1}` is summed out
/// against the stationary `k`-block law.
fn markov_predictive(process: &Process, recent: &[u8]) -> Vec<f64> {
    let (order, transitions) = match process.spec() {
        ProcessSpec::Markov { order, transitions } => (*order, transitions),
        _ => unreachable!(),
    };
    let a = process.alphabet().size();
    let suffix_code = recent.iter().fold(0usize, |acc, &x| acc * a + x as usize);
    if recent.len() == order {
        return transitions[suffix_code].clone();
    }
    let suffix_states = a.pow(recent.len() as u32);
    let pre_states = a.pow((order - recent.len()) as u32);
    let pi = process.stationary();
    let mut out = vec![0.0; a];
    let mut total = 0.0;
    for pre in 0..pre_states {
        let state = pre * suffix_states + suffix_code;
        let w = pi[state];
        if w == 0.0 {
            continue;
        }
        total += w;
        for (o, p) in out.iter_mut().zip(&transitions[state]) {
            *o += w * p;
        }
    }
    if total > 0.0 {
        out.iter_mut().for_each(|v| *v /= total);
    }
    out
}

/// `P(X_{n+1} = . | X_0..=X_n = history)` for a nonempty history.
pub fn oracle_conditional(process: &Process, history: &SymbolSequence) -> Result<Vec<f64>> {
    process.check_history(history)?;
    if history.is_empty() {
        return Err(Error::domain("history must contain at least X_0"));
    }
    let mut oracle = process.oracle();
    for &x in history.as_slice() {
        oracle.observe(x)?;
    }
    Ok(oracle.predictive())
}

/// `E[g(X_{n+1}) | X_0..=X_n = history]`.
pub fn oracle_payoff_expectation(process: &Process, history: &SymbolSequence, g: &PayoffFunction) -> Result<f64> {
    if g.alphabet_size() != process.alphabet().size() {
        return Err(Error::domain("payoff and process alphabets differ in size"));
    }
    Ok(g.expectation(&oracle_conditional(process, history)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn binary() -> Alphabet {
        Alphabet::numeric(2).unwrap()
    }

    fn history(data: &[u8]) -> SymbolSequence {
        SymbolSequence::from_indices(binary(), data.to_vec()).unwrap()
    }

    fn markov1() -> Process {
        Process::new(
            binary(),
            ProcessSpec::Markov {
                order: 1,
                transitions: vec![vec![0.7, 0.3], vec![0.3, 0.7]],
            },
        )
        .unwrap()
    }

    fn order2() -> Process {
        Process::new(
            binary(),
            ProcessSpec::Markov {
                order: 2,
                transitions: vec![vec![0.9, 0.1], vec![0.6, 0.4], vec![0.4, 0.6], vec![0.1, 0.9]],
            },
        )
        .unwrap()
    }

    #[test]
    fn markov_reads_the_row() {
        let p = markov1();
        assert_eq!(oracle_conditional(&p, &history(&[1, 1, 0])).unwrap(), vec![0.7, 0.3]);
        let g = PayoffFunction::indicator(1, 2).unwrap();
        assert_eq!(oracle_payoff_expectation(&p, &history(&[0, 1]), &g).unwrap(), 0.7);
        let c = PayoffFunction::constant(2.5, 2).unwrap();
        assert!((oracle_payoff_expectation(&p, &history(&[0, 1, 1]), &c).unwrap() - 2.5).abs() < 1e-15);
        assert!(oracle_conditional(&p, &history(&[])).is_err());
    }

    #[test]
    fn short_history_uses_block_law() {
        // forward route: P(X_1 = x | X_0 = h) = P(X_0 X_1 = h x) / P(X_0 = h),
        // both marginals of the stationary 2-block law
        let p = order2();
        let pi = p.stationary().to_vec();
        for h in 0..2u8 {
            let joint: Vec<f64> = (0..2).map(|x| pi[(h as usize) * 2 + x]).collect();
            let total: f64 = joint.iter().sum();
            let got = oracle_conditional(&p, &history(&[h])).unwrap();
            for x in 0..2 {
                assert!((got[x] - joint[x] / total).abs() < 1e-12, "h={h} x={x}");
            }
        }
    }

    #[test]
    fn continuity_in_old_coordinates() {
        let p = order2();
        let a = oracle_conditional(&p, &history(&[0, 0, 0, 1, 1])).unwrap();
        let b = oracle_conditional(&p, &history(&[1, 1, 0, 1, 1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identity_emission_reduces_to_the_chain() {
        let chain = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let hmm = Process::new(
            binary(),
            ProcessSpec::Hidden {
                transitions: chain.clone(),
                emissions: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            },
        )
        .unwrap();
        let mc = Process::new(
            binary(),
            ProcessSpec::Markov {
                order: 1,
                transitions: chain,
            },
        )
        .unwrap();
        for h in [&[0u8][..], &[1], &[0, 1, 1, 0], &[1, 1, 1]] {
            let a = oracle_conditional(&hmm, &history(h)).unwrap();
            let b = oracle_conditional(&mc, &history(h)).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    /// P(X_0..=X_n = obs, X_{n+1} = x) summed over every hidden path.
    fn path_sum(p: &Process, obs: &[u8], x: u8) -> f64 {
        let (a, b) = match p.spec() {
            ProcessSpec::Hidden { transitions, emissions } => (transitions, emissions),
            _ => unreachable!(),
        };
        let s = a.len();
        let len = obs.len() + 1;
        let mut total = 0.0;
        for path in 0..s.pow(len as u32) {
            let states: Vec<usize> = (0..len).map(|i| (path / s.pow(i as u32)) % s).collect();
            let mut w = p.stationary()[states[0]];
            for i in 0..len {
                if i > 0 {
                    w *= a[states[i - 1]][states[i]];
                }
                let sym = if i < obs.len() { obs[i] } else { x };
                w *= b[states[i]][sym as usize];
            }
            total += w;
        }
        total
    }

    #[test]
    fn forward_filter_matches_path_enumeration() {
        let specs = [
            ProcessSpec::Hidden {
                transitions: vec![vec![0.8, 0.2], vec![0.3, 0.7]],
                emissions: vec![vec![0.9, 0.1], vec![0.25, 0.75]],
            },
            ProcessSpec::Hidden {
                transitions: vec![vec![0.5, 0.3, 0.2], vec![0.1, 0.6, 0.3], vec![0.4, 0.0, 0.6]],
                emissions: vec![vec![0.7, 0.3], vec![0.2, 0.8], vec![0.5, 0.5]],
            },
        ];
        for spec in specs {
            let p = Process::new(binary(), spec).unwrap();
            for len in 1..=10usize {
                for code in [0usize, 1, (1 << len) - 1, 0b1011011011 & ((1 << len) - 1)] {
                    let obs: Vec<u8> = (0..len).map(|i| ((code >> i) & 1) as u8).collect();
                    let got = oracle_conditional(&p, &history(&obs)).unwrap();
                    let joint: Vec<f64> = (0..2).map(|x| path_sum(&p, &obs, x)).collect();
                    let z: f64 = joint.iter().sum();
                    for x in 0..2 {
                        assert!((got[x] - joint[x] / z).abs() < 1e-10, "len={len} code={code}");
                    }
                }
            }
        }
    }

    #[test]
    fn impossible_histories_are_errors() {
        let p = Process::new(binary(), ProcessSpec::Iid { probs: vec![1.0, 0.0] }).unwrap();
        assert_eq!(
            oracle_conditional(&p, &history(&[0, 1])),
            Err(Error::ImpossibleHistory { position: 1 })
        );
    }
}
