//! Exact equivalence check between the from-scratch evaluator and an
//! incremental one.
//!
//! Random sequences are pushed one symbol at a time. After every push the
//! incremental evaluator's recurrence-time lists, `kappa`, `lambda` (for
//! each indexed block length), scalar estimate and distribution estimate
//! must equal the from-scratch results bit for bit. The first mismatch is
//! reported with the shortest failing prefix.

use std::fmt;

use crate::alphabet::{Alphabet, SymbolSequence};
use crate::error::Result;
use crate::estimator::{self, DistributionEstimate, EstimateResult};
use crate::index::StreamingEstimator;
use crate::payoff::PayoffFunction;
use crate::rng::{derive_seed, SimRng};
use crate::schedule::Schedules;

/// The operations an incremental evaluator must reproduce.
pub trait IncrementalEvaluator {
    fn push(&mut self, x: u8) -> Result<()>;
    /// Largest block length the evaluator indexes.
    fn k_max(&self) -> usize;
    fn recurrence_times(&self, k: usize, count: usize) -> Result<Vec<usize>>;
    fn kappa(&self) -> Result<usize>;
    fn lambda(&self, k: usize) -> Result<u64>;
    fn estimate(&self, g: &PayoffFunction) -> Result<EstimateResult>;
    fn distribution(&self) -> Result<DistributionEstimate>;
}

impl IncrementalEvaluator for StreamingEstimator {
    fn push(&mut self, x: u8) -> Result<()> {
        StreamingEstimator::push(self, x).map(|_| ())
    }
    fn k_max(&self) -> usize {
        StreamingEstimator::k_max(self)
    }
    fn recurrence_times(&self, k: usize, count: usize) -> Result<Vec<usize>> {
        StreamingEstimator::recurrence_times(self, k, count)
    }
    fn kappa(&self) -> Result<usize> {
        StreamingEstimator::kappa(self)
    }
    fn lambda(&self, k: usize) -> Result<u64> {
        StreamingEstimator::lambda(self, k)
    }
    fn estimate(&self, g: &PayoffFunction) -> Result<EstimateResult> {
        self.current_estimate(g)
    }
    fn distribution(&self) -> Result<DistributionEstimate> {
        self.current_distribution()
    }
}

/// A deliberately broken evaluator whose `lambda` is one too large.
/// Used to check that the verifier catches and reports faults.
#[doc(hidden)]
pub struct OffByOneLambda(pub StreamingEstimator);

impl IncrementalEvaluator for OffByOneLambda {
    fn push(&mut self, x: u8) -> Result<()> {
        self.0.push(x).map(|_| ())
    }
    fn k_max(&self) -> usize {
        self.0.k_max()
    }
    fn recurrence_times(&self, k: usize, count: usize) -> Result<Vec<usize>> {
        self.0.recurrence_times(k, count)
    }
    fn kappa(&self) -> Result<usize> {
        self.0.kappa()
    }
    fn lambda(&self, k: usize) -> Result<u64> {
        Ok(self.0.lambda(k)? + 1)
    }
    fn estimate(&self, g: &PayoffFunction) -> Result<EstimateResult> {
        self.0.current_estimate(g)
    }
    fn distribution(&self) -> Result<DistributionEstimate> {
        self.0.current_distribution()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Sequences are `X_0..=X_max_n`.
    pub max_n: usize,
    pub cases: usize,
    pub seed: u64,
    pub schedules: Schedules,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 2000,
            cases: 200,
            seed: 0,
            schedules: Schedules::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub case: usize,
    pub alphabet_size: usize,
    pub n: usize,
    pub quantity: String,
    pub expected: String,
    pub actual: String,
    /// `X_0..=X_n`, the shortest prefix exhibiting the mismatch.
    pub prefix: Vec<u8>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: String = self.prefix.iter().map(|x| char::from(b'0' + x)).collect();
        write!(
            f,
            "case {} (alphabet size {}), n = {}: {} expected {} but got {}\nprefix: {}",
            self.case, self.alphabet_size, self.n, self.quantity, self.expected, self.actual, digits
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifySummary {
    pub cases: usize,
    pub prefixes: usize,
    pub comparisons: u64,
}

/// Case `case`'s sequence: alphabet size 2..=4, uniform symbols for even
/// cases and a sticky source (repeat the previous symbol w.p. 0.8) for odd
/// ones, so that long blocks recur too.
pub fn case_sequence(seed: u64, case: usize, len: usize) -> (usize, Vec<u8>) {
    let mut rng = SimRng::new(derive_seed(seed, case as u64));
    let size = 2 + (rng.next_u64() % 3) as usize;
    let mut data = Vec::with_capacity(len);
    for i in 0..len {
        let fresh = (rng.next_u64() % size as u64) as u8;
        let x = if case % 2 == 1 && i > 0 && rng.next_f64() < 0.8 {
            data[i - 1]
        } else {
            fresh
        };
        data.push(x);
    }
    (size, data)
}

fn bits(xs: &[f64]) -> Vec<u64> {
    xs.iter().map(|x| x.to_bits()).collect()
}

/// Runs the equivalence check with evaluators built by `make`.
pub fn run<E, F>(cfg: &VerifyConfig, mut make: F) -> Result<std::result::Result<VerifySummary, Counterexample>>
where
    E: IncrementalEvaluator,
    F: FnMut(Alphabet, Schedules, usize) -> Result<E>,
{
    let mut summary = VerifySummary::default();
    for case in 0..cfg.cases {
        let (size, data) = case_sequence(cfg.seed, case, cfg.max_n + 1);
        let alphabet = Alphabet::numeric(size)?;
        let horizon = cfg.max_n.max(1);
        let mut inc = make(alphabet.clone(), cfg.schedules, horizon)?;
        let payoffs: Vec<PayoffFunction> = vec![
            PayoffFunction::indicator((size - 1) as u8, size)?,
            PayoffFunction::new((0..size).map(|i| (i as f64 + 1.0) * 0.37 - 0.5).collect())?,
        ];
        let mut seq = SymbolSequence::with_capacity(alphabet, data.len());
        for (n, &x) in data.iter().enumerate() {
            seq.push(x)?;
            inc.push(x)?;
            let fail = |quantity: String, expected: String, actual: String| Counterexample {
                case,
                alphabet_size: size,
                n,
                quantity,
                expected,
                actual,
                prefix: data[..=n].to_vec(),
            };
            for k in 1..=inc.k_max().min(n + 1) {
                let want = estimator::recurrence_times(&seq, n, k, usize::MAX)?;
                let got = inc.recurrence_times(k, usize::MAX)?;
                if want != got {
                    return Ok(Err(fail(format!("tau^{k}"), format!("{want:?}"), format!("{got:?}"))));
                }
                let want = estimator::lambda(&seq, n, k)?;
                let got = inc.lambda(k)?;
                if want != got {
                    return Ok(Err(fail(format!("lambda(k={k})"), want.to_string(), got.to_string())));
                }
                summary.comparisons += 2;
            }
            if n >= 1 {
                let want = estimator::kappa(&seq, n, &cfg.schedules)?;
                let got = inc.kappa()?;
                if want != got {
                    return Ok(Err(fail("kappa".into(), want.to_string(), got.to_string())));
                }
                summary.comparisons += 1;
            }
            for g in &payoffs {
                let want = estimator::estimate(&seq, n, g, &cfg.schedules)?;
                let got = inc.estimate(g)?;
                let same = want.value.to_bits() == got.value.to_bits()
                    && (want.kappa, want.lambda, want.abstained) == (got.kappa, got.lambda, got.abstained);
                if !same {
                    return Ok(Err(fail("estimate".into(), format!("{want:?}"), format!("{got:?}"))));
                }
                summary.comparisons += 1;
            }
            let want = estimator::estimate_distribution(&seq, n, &cfg.schedules)?;
            let got = inc.distribution()?;
            let same = bits(&want.probs) == bits(&got.probs)
                && (want.kappa, want.lambda, want.abstained) == (got.kappa, got.lambda, got.abstained);
            if !same {
                return Ok(Err(fail(
                    "distribution".into(),
                    format!("{want:?}"),
                    format!("{got:?}"),
                )));
            }
            summary.comparisons += 1;
            summary.prefixes += 1;
        }
        summary.cases += 1;
    }
    Ok(Ok(summary))
}

/// [`run`] against [`StreamingEstimator`].
pub fn verify_streaming(cfg: &VerifyConfig) -> Result<std::result::Result<VerifySummary, Counterexample>> {
    run(cfg, StreamingEstimator::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{ContextSchedule, ThresholdSchedule};

    #[test]
    fn streaming_matches_on_small_cases() {
        let cfg = VerifyConfig {
            max_n: 300,
            cases: 10,
            ..VerifyConfig::default()
        };
        let summary = verify_streaming(&cfg).unwrap().unwrap();
        assert_eq!(summary.prefixes, 3010);
    }

    #[test]
    fn streaming_matches_with_long_contexts() {
        let sch = Schedules::new(
            ContextSchedule::Log { coef: 1.0 },
            ThresholdSchedule::Power { exponent: 0.25 },
        );
        let cfg = VerifyConfig {
            max_n: 400,
            cases: 8,
            seed: 5,
            schedules: sch,
        };
        verify_streaming(&cfg).unwrap().unwrap();
    }

    #[test]
    fn trivial_horizon() {
        let cfg = VerifyConfig {
            max_n: 1,
            cases: 20,
            ..VerifyConfig::default()
        };
        assert!(verify_streaming(&cfg).unwrap().is_ok());
    }

    #[test]
    fn off_by_one_is_caught_at_the_first_symbol() {
        let cfg = VerifyConfig {
            max_n: 50,
            cases: 3,
            ..VerifyConfig::default()
        };
        let cex = run(&cfg, |a, s, h| StreamingEstimator::new(a, s, h).map(OffByOneLambda))
            .unwrap()
            .unwrap_err();
        assert_eq!((cex.case, cex.n, cex.prefix.len()), (0, 0, 1));
        assert!(cex.quantity.starts_with("lambda"));
        assert!(cex.to_string().contains("prefix:"));
    }
}
