//! From-scratch evaluation of the forward estimator.
//!
//! For a segment `X_0..=X_n` and block length `k`, the recurrence times
//! `tau_1 < tau_2 < ...` are the backward shifts `t` at which the block
//! `X_{n-k+1}..=X_n` reappears, i.e. `X_{n-k+1-t}..=X_{n-t}` equals it.
//! Only occurrences lying fully inside the segment (`n-k+1-t >= 0`) are
//! counted, and overlapping occurrences are distinct.
//!
//! * `kappa_n` is the largest `k <= K(n)` whose block has at least `J(n)`
//!   earlier occurrences, or 0 when no such `k` exists.
//! * `lambda_n` is the number of earlier occurrences of the `kappa_n`-block.
//! * The estimate of `E[g(X_{n+1}) | X_0..=X_n]` is the average of `g` over
//!   the symbols that followed those occurrences, or 0 (abstention) when
//!   `n == 0` or `kappa_n == 0`.
//!
//! Everything here scans the segment directly, costing `O(n * k)` per query.
//! [`crate::index::StreamingEstimator`] gives identical answers incrementally.

use crate::alphabet::SymbolSequence;
use crate::error::{Error, Result};
use crate::payoff::PayoffFunction;
use crate::schedule::Schedules;

/// The scalar estimate together with the quantities that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateResult {
    pub value: f64,
    pub kappa: usize,
    pub lambda: u64,
    pub abstained: bool,
}

impl EstimateResult {
    pub fn abstained() -> Self {
        EstimateResult {
            value: 0.0,
            kappa: 0,
            lambda: 0,
            abstained: true,
        }
    }

    pub(crate) fn from_histogram(kappa: usize, histogram: &[u64], g: &PayoffFunction) -> Self {
        let lambda: u64 = histogram.iter().sum();
        debug_assert!(kappa > 0 && lambda > 0);
        EstimateResult {
            value: g.weighted_sum(histogram) / lambda as f64,
            kappa,
            lambda,
            abstained: false,
        }
    }
}

/// The estimate for every indicator payoff at once: the normalized successor
/// histogram of the matched block.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionEstimate {
    pub probs: Vec<f64>,
    pub kappa: usize,
    pub lambda: u64,
    pub abstained: bool,
}

impl DistributionEstimate {
    pub fn abstained(alphabet_size: usize) -> Self {
        DistributionEstimate {
            probs: vec![0.0; alphabet_size],
            kappa: 0,
            lambda: 0,
            abstained: true,
        }
    }

    pub(crate) fn from_histogram(kappa: usize, histogram: &[u64]) -> Self {
        let lambda: u64 = histogram.iter().sum();
        debug_assert!(kappa > 0 && lambda > 0);
        let denom = lambda as f64;
        DistributionEstimate {
            probs: histogram.iter().map(|&c| c as f64 / denom).collect(),
            kappa,
            lambda,
            abstained: false,
        }
    }
}

fn check_position(seq: &SymbolSequence, n: usize) -> Result<()> {
    if n >= seq.len() {
        return Err(Error::domain(format!(
            "position {n} is outside a sequence of length {}",
            seq.len()
        )));
    }
    Ok(())
}

fn check_block(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n + 1 {
        return Err(Error::domain(format!(
            "block length {k} must lie in 1..={} at position {n}",
            n + 1
        )));
    }
    Ok(())
}

/// Visits the recurrence times `tau_1 < tau_2 < ...` of the `k`-block ending
/// at `n`, stopping after `limit` of them.
fn for_each_recurrence(data: &[u8], n: usize, k: usize, limit: usize, mut f: impl FnMut(usize)) -> usize {
    let start = n + 1 - k;
    let block = &data[start..=n];
    let mut found = 0;
    // t ranges over 1..=n-k+1 so that the match starts at n-k+1-t >= 0
    for t in 1..=start {
        if found == limit {
            break;
        }
        if &data[start - t..=n - t] == block {
            found += 1;
            f(t);
        }
    }
    found
}

/// Up to `count` recurrence times of the `k`-block ending at `n`, in
/// increasing order. Fewer are returned when the segment runs out.
pub fn recurrence_times(seq: &SymbolSequence, n: usize, k: usize, count: usize) -> Result<Vec<usize>> {
    check_position(seq, n)?;
    check_block(n, k)?;
    let mut out = Vec::new();
    for_each_recurrence(seq.as_slice(), n, k, count, |t| out.push(t));
    Ok(out)
}

/// The adaptive context length `kappa_n`; 0 means the estimator abstains.
pub fn kappa(seq: &SymbolSequence, n: usize, sch: &Schedules) -> Result<usize> {
    check_position(seq, n)?;
    if n == 0 {
        return Err(Error::domain("kappa is defined for n >= 1"));
    }
    let cap = sch.context_len(n as u64, seq.alphabet().size())?.min(n + 1);
    let threshold = sch.threshold(n as u64)?;
    let data = seq.as_slice();
    Ok((1..=cap)
        .rev()
        .find(|&k| for_each_recurrence(data, n, k, threshold, |_| ()) == threshold)
        .unwrap_or(0))
}

/// Number of earlier in-segment occurrences of the `k`-block ending at `n`.
pub fn lambda(seq: &SymbolSequence, n: usize, k: usize) -> Result<u64> {
    check_position(seq, n)?;
    check_block(n, k)?;
    Ok(for_each_recurrence(seq.as_slice(), n, k, usize::MAX, |_| ()) as u64)
}

/// Counts of the symbols `X_{n-tau_i+1}` following each earlier occurrence.
pub fn successor_histogram(seq: &SymbolSequence, n: usize, k: usize) -> Result<Vec<u64>> {
    check_position(seq, n)?;
    check_block(n, k)?;
    let data = seq.as_slice();
    let mut hist = vec![0u64; seq.alphabet().size()];
    for_each_recurrence(data, n, k, usize::MAX, |t| hist[data[n - t + 1] as usize] += 1);
    Ok(hist)
}

fn matched_histogram(seq: &SymbolSequence, n: usize, sch: &Schedules) -> Result<Option<(usize, Vec<u64>)>> {
    check_position(seq, n)?;
    if n == 0 {
        return Ok(None);
    }
    match kappa(seq, n, sch)? {
        0 => Ok(None),
        k => Ok(Some((k, successor_histogram(seq, n, k)?))),
    }
}

/// The estimate of `E[g(X_{n+1}) | X_0..=X_n]`.
pub fn estimate(seq: &SymbolSequence, n: usize, g: &PayoffFunction, sch: &Schedules) -> Result<EstimateResult> {
    if g.alphabet_size() != seq.alphabet().size() {
        return Err(Error::domain("payoff and sequence alphabets differ in size"));
    }
    Ok(match matched_histogram(seq, n, sch)? {
        None => EstimateResult::abstained(),
        Some((k, hist)) => EstimateResult::from_histogram(k, &hist, g),
    })
}

/// The estimate for all indicator payoffs `1{x = z}` at once.
pub fn estimate_distribution(seq: &SymbolSequence, n: usize, sch: &Schedules) -> Result<DistributionEstimate> {
    Ok(match matched_histogram(seq, n, sch)? {
        None => DistributionEstimate::abstained(seq.alphabet().size()),
        Some((k, hist)) => DistributionEstimate::from_histogram(k, &hist),
    })
}

/// Truncated `d*` distance between two one-sided pasts.
///
/// Both slices are in chronological order, so coordinate `i` (the symbol `i`
/// steps back) is `x[x.len() - 1 - i]`. Returns
/// `sum_{i < depth} 2^{-i-1} * 1{x_{-i} != y_{-i}}`; the omitted tail is at
/// most `2^{-depth}`.
pub fn d_star(x: &[u8], y: &[u8], depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::domain("d* depth must be >= 1"));
    }
    if x.len() < depth || y.len() < depth {
        return Err(Error::domain(format!(
            "d* at depth {depth} needs pasts of at least that length, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let mut dist = 0.0;
    let mut weight = 0.5;
    for (a, b) in x.iter().rev().zip(y.iter().rev()).take(depth) {
        if a != b {
            dist += weight;
        }
        weight *= 0.5;
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn seq(data: &[u8], size: usize) -> SymbolSequence {
        SymbolSequence::from_indices(Alphabet::numeric(size).unwrap(), data.to_vec()).unwrap()
    }

    /// Recurrence times straight from the definition: tau_i is the smallest
    /// t > tau_{i-1} whose shifted block matches, searched without bounds on
    /// i and filtered to in-segment matches afterwards.
    fn oracle_taus(data: &[u8], n: usize, k: usize) -> Vec<usize> {
        let mut taus = vec![];
        let mut prev = 0;
        loop {
            let next = (prev + 1..=n)
                .find(|&t| t + k <= n + 1 && (0..k).all(|j| data[n - k + 1 - t + j] == data[n - k + 1 + j]));
            match next {
                Some(t) => {
                    taus.push(t);
                    prev = t;
                }
                None => return taus,
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        let s = seq(&[0, 1, 0, 1, 0], 2);
        assert_eq!(oracle_taus(s.as_slice(), 4, 1), vec![2, 4]);
        assert_eq!(recurrence_times(&s, 4, 1, 5).unwrap(), vec![2, 4]);
        assert_eq!(oracle_taus(s.as_slice(), 4, 2), vec![2]);
        assert_eq!(recurrence_times(&s, 4, 2, 5).unwrap(), vec![2]);
        let c = seq(&[0, 0, 0, 0], 2);
        assert_eq!(recurrence_times(&c, 3, 1, 10).unwrap(), vec![1, 2, 3]);
        assert_eq!(recurrence_times(&c, 3, 1, 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn recurrence_domain_errors() {
        let s = seq(&[0, 1, 0], 2);
        assert!(recurrence_times(&s, 2, 4, 1).is_err());
        assert!(recurrence_times(&s, 2, 0, 1).is_err());
        assert!(recurrence_times(&s, 3, 1, 1).is_err());
        assert_eq!(recurrence_times(&s, 2, 3, 1).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn kappa_lambda_examples() {
        let sch = Schedules::default();
        let s = seq(&[0, 1, 0, 1, 0], 2);
        assert_eq!(kappa(&s, 4, &sch).unwrap(), 1);
        assert_eq!(lambda(&s, 4, 1).unwrap(), 2);

        let s = seq(&[0, 1], 2);
        assert_eq!(kappa(&s, 1, &sch).unwrap(), 0);
        assert_eq!(lambda(&s, 1, 1).unwrap(), 0);

        let c = seq(&[0; 11], 2);
        assert_eq!(kappa(&c, 10, &sch).unwrap(), 1);
        assert_eq!(lambda(&c, 10, 1).unwrap(), 10);

        assert!(kappa(&c, 0, &sch).is_err());
        assert!(lambda(&c, 10, 12).is_err());
    }

    #[test]
    fn estimate_examples() {
        let sch = Schedules::default();
        let s = seq(&[0, 1, 0, 1, 0], 2);
        let g = PayoffFunction::indicator(1, 2).unwrap();
        let r = estimate(&s, 4, &g, &sch).unwrap();
        assert_eq!(
            r,
            EstimateResult {
                value: 1.0,
                kappa: 1,
                lambda: 2,
                abstained: false
            }
        );
        let d = estimate_distribution(&s, 4, &sch).unwrap();
        assert_eq!(d.probs, vec![0.0, 1.0]);

        let s = seq(&[0, 1], 2);
        assert_eq!(estimate(&s, 1, &g, &sch).unwrap(), EstimateResult::abstained());
        assert_eq!(
            estimate_distribution(&s, 1, &sch).unwrap(),
            DistributionEstimate::abstained(2)
        );
        assert_eq!(estimate(&s, 0, &g, &sch).unwrap(), EstimateResult::abstained());

        let c = seq(&[0; 11], 2);
        let g0 = PayoffFunction::indicator(0, 2).unwrap();
        let r = estimate(&c, 10, &g0, &sch).unwrap();
        assert_eq!((r.value, r.kappa, r.lambda), (1.0, 1, 10));
    }

    #[test]
    fn periodic_distribution_matches_brute_force() {
        // K(9)=1, J(9)=3; the last symbol is 0 and it occurred at 0,1,3,4,6,7
        let data = [0, 0, 1, 0, 0, 1, 0, 0, 1, 0];
        let s = seq(&data, 2);
        let sch = Schedules::default();
        let n = 9;
        let k = kappa(&s, n, &sch).unwrap();
        assert_eq!(k, 1);
        let taus = oracle_taus(&data, n, k);
        let mut hist = [0u64; 2];
        for t in &taus {
            hist[data[n - t + 1] as usize] += 1;
        }
        assert_eq!(hist, [3, 3]);
        let d = estimate_distribution(&s, n, &sch).unwrap();
        assert_eq!(d.lambda, 6);
        assert_eq!(d.probs, vec![0.5, 0.5]);
    }

    #[test]
    fn d_star_examples() {
        let x = [0u8, 1, 1, 0, 1];
        assert_eq!(d_star(&x, &x, 5).unwrap(), 0.0);
        let mut y = x;
        y[4] = 0;
        assert_eq!(d_star(&x, &y, 1).unwrap(), 0.5);
        assert_eq!(d_star(&x, &y, 5).unwrap(), 0.5);
        let a = [0u8; 20];
        let b = [1u8; 20];
        assert_eq!(d_star(&a, &b, 20).unwrap(), 1.0 - 2f64.powi(-20));
        assert!(d_star(&a, &b, 0).is_err());
        assert!(d_star(&a, &b, 21).is_err());
    }
}
