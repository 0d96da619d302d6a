//! Incremental occurrence index.
//!
//! For every block length `k <= k_max` the index keeps, per distinct block,
//! the number of occurrences that already have a successor, a histogram of
//! those successors and the end position of the latest such occurrence.
//! Each end position also links back to the previous occurrence of the same
//! block, so recurrence-time lists can be walked without rescanning.
//!
//! The block ending at the current position `n` has no successor yet and is
//! therefore absent from the tables. Every earlier occurrence of it that lies
//! fully inside the segment ends at some `m <= n - 1` and has been recorded,
//! so the stored count is exactly `lambda(seq, n, k)`. This makes a query
//! `O(K(n) + |X|)` and a push `O(k_max)`.

use rustc_hash::FxHashMap;

use crate::alphabet::{Alphabet, SymbolSequence};
use crate::error::{Error, Result};
use crate::estimator::{DistributionEstimate, EstimateResult};
use crate::payoff::PayoffFunction;
use crate::schedule::Schedules;

const NO_POSITION: u32 = u32::MAX;

/// A `k`-block packed into an integer, base `|X|`, most recent symbol least
/// significant. Injective for fixed `k` as long as `|X|^k` fits in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    pub k: usize,
    pub code: u64,
}

impl BlockKey {
    pub fn encode(block: &[u8], alphabet_size: usize) -> BlockKey {
        let base = alphabet_size as u64;
        let code = block.iter().fold(0u64, |acc, &x| acc * base + x as u64);
        BlockKey { k: block.len(), code }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStats {
    pub count_with_successor: u64,
    pub successor_histogram: Vec<u64>,
    pub last_end_position: usize,
}

/// Online forward estimator over an owned, append-only sequence.
#[derive(Clone, Debug)]
pub struct StreamingEstimator {
    seq: SymbolSequence,
    sch: Schedules,
    horizon: usize,
    k_max: usize,
    powers: Vec<u64>,
    tables: Vec<FxHashMap<u64, BlockStats>>,
    prev_end: Vec<Vec<u32>>,
    ops: u64,
}

impl StreamingEstimator {
    /// An empty estimator able to hold `X_0..=X_horizon`.
    pub fn new(alphabet: Alphabet, sch: Schedules, horizon: usize) -> Result<Self> {
        sch.validate()?;
        if horizon == 0 {
            return Err(Error::domain("horizon must be >= 1"));
        }
        if horizon >= NO_POSITION as usize {
            return Err(Error::domain(format!(
                "horizon {horizon} exceeds the index position range"
            )));
        }
        let a = alphabet.size();
        let k_max = sch.context_len(horizon as u64, a)?;
        if (a as u64).checked_pow(k_max as u32).is_none() {
            return Err(Error::domain(format!(
                "blocks of length {k_max} over {a} symbols do not fit in 64 bits"
            )));
        }
        let powers: Vec<u64> = (0..k_max as u32).map(|i| (a as u64).pow(i)).collect();
        Ok(StreamingEstimator {
            seq: SymbolSequence::with_capacity(alphabet, horizon + 1),
            sch,
            horizon,
            k_max,
            powers,
            tables: vec![FxHashMap::default(); k_max],
            prev_end: vec![Vec::with_capacity(horizon); k_max],
            ops: 0,
        })
    }

    pub fn sequence(&self) -> &SymbolSequence {
        &self.seq
    }

    pub fn schedules(&self) -> &Schedules {
        &self.sch
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Table updates performed so far; bounded by `k_max` per push.
    pub fn operations(&self) -> u64 {
        self.ops
    }

    /// Number of distinct blocks currently stored across all lengths.
    pub fn stored_keys(&self) -> usize {
        self.tables.iter().map(FxHashMap::len).sum()
    }

    /// Appends `x` and returns the new length.
    pub fn push(&mut self, x: u8) -> Result<usize> {
        self.seq.alphabet().check(x)?;
        let m = self.seq.len();
        if m > self.horizon {
            return Err(Error::Capacity {
                horizon: self.horizon,
                requested: m,
            });
        }
        if m >= 1 {
            let data = self.seq.as_slice();
            let end = m - 1;
            let a = self.seq.alphabet().size();
            let mut code = 0u64;
            for k in 1..=self.k_max {
                let links = &mut self.prev_end[k - 1];
                if k > m {
                    links.push(NO_POSITION);
                    continue;
                }
                code += data[m - k] as u64 * self.powers[k - 1];
                let stats = self.tables[k - 1].entry(code).or_insert_with(|| BlockStats {
                    count_with_successor: 0,
                    successor_histogram: vec![0; a],
                    last_end_position: NO_POSITION as usize,
                });
                links.push(if stats.count_with_successor == 0 {
                    NO_POSITION
                } else {
                    stats.last_end_position as u32
                });
                stats.count_with_successor += 1;
                stats.successor_histogram[x as usize] += 1;
                stats.last_end_position = end;
                self.ops += 1;
            }
        }
        self.seq.push(x)?;
        Ok(self.seq.len())
    }

    pub fn extend<I: IntoIterator<Item = u8>>(&mut self, xs: I) -> Result<usize> {
        for x in xs {
            self.push(x)?;
        }
        Ok(self.len())
    }

    /// Stats of an arbitrary block, if it has occurred with a successor.
    pub fn block_stats(&self, block: &[u8]) -> Option<&BlockStats> {
        let k = block.len();
        if k == 0 || k > self.k_max {
            return None;
        }
        let key = BlockKey::encode(block, self.seq.alphabet().size());
        self.tables[k - 1].get(&key.code)
    }

    fn current_code(&self, k: usize) -> u64 {
        let data = self.seq.as_slice();
        BlockKey::encode(&data[data.len() - k..], self.seq.alphabet().size()).code
    }

    fn current_stats(&self, k: usize) -> Option<&BlockStats> {
        self.tables[k - 1].get(&self.current_code(k))
    }

    fn check_current_block(&self, k: usize) -> Result<usize> {
        let len = self.seq.len();
        if len == 0 {
            return Err(Error::domain("the sequence is empty"));
        }
        if k == 0 || k > len || k > self.k_max {
            return Err(Error::domain(format!(
                "block length {k} must lie in 1..={}",
                len.min(self.k_max)
            )));
        }
        Ok(len - 1)
    }

    /// `lambda(seq, n, k)` at the current `n`, for `k <= k_max`.
    pub fn lambda(&self, k: usize) -> Result<u64> {
        self.check_current_block(k)?;
        Ok(self.current_stats(k).map_or(0, |s| s.count_with_successor))
    }

    /// Up to `count` recurrence times of the current `k`-block, increasing.
    pub fn recurrence_times(&self, k: usize, count: usize) -> Result<Vec<usize>> {
        let n = self.check_current_block(k)?;
        let mut out = Vec::new();
        let mut pos = match self.current_stats(k) {
            Some(s) => s.last_end_position as u32,
            None => NO_POSITION,
        };
        while pos != NO_POSITION && out.len() < count {
            out.push(n - pos as usize);
            pos = self.prev_end[k - 1][pos as usize];
        }
        Ok(out)
    }

    /// `kappa_n` at the current `n`, together with the matched block's stats.
    fn matched(&self) -> Result<Option<(usize, &BlockStats)>> {
        let len = self.seq.len();
        if len <= 1 {
            return Ok(None);
        }
        let n = (len - 1) as u64;
        let cap = self.sch.context_len(n, self.seq.alphabet().size())?;
        if cap > self.k_max {
            return Err(Error::Capacity {
                horizon: self.k_max,
                requested: cap,
            });
        }
        let threshold = self.sch.threshold(n)? as u64;
        for k in (1..=cap.min(len)).rev() {
            if let Some(stats) = self.current_stats(k) {
                if stats.count_with_successor >= threshold {
                    return Ok(Some((k, stats)));
                }
            }
        }
        Ok(None)
    }

    pub fn kappa(&self) -> Result<usize> {
        Ok(self.matched()?.map_or(0, |(k, _)| k))
    }

    /// The estimate at the current `n`; identical to
    /// [`crate::estimator::estimate`] on the same prefix.
    pub fn current_estimate(&self, g: &PayoffFunction) -> Result<EstimateResult> {
        if g.alphabet_size() != self.seq.alphabet().size() {
            return Err(Error::domain("payoff and sequence alphabets differ in size"));
        }
        Ok(match self.matched()? {
            None => EstimateResult::abstained(),
            Some((k, stats)) => EstimateResult::from_histogram(k, &stats.successor_histogram, g),
        })
    }

    pub fn current_distribution(&self) -> Result<DistributionEstimate> {
        Ok(match self.matched()? {
            None => DistributionEstimate::abstained(self.seq.alphabet().size()),
            Some((k, stats)) => DistributionEstimate::from_histogram(k, &stats.successor_histogram),
        })
    }
}
