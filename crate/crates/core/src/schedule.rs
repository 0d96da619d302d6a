//! Growth schedules for the context-length cap `K(n)` and the occurrence
//! threshold `J(n)`.
//!
//! The defaults are `K(n) = max(1, floor(0.1 * log_|X| n))` and
//! `J(n) = max(1, ceil(sqrt(n)))`. Both are evaluated in exact integer
//! arithmetic whenever the coefficient (resp. exponent) is the reciprocal of
//! an integer, which covers the defaults: `floor(log_a(n) / q)` is the largest
//! `m` with `a^(q*m) <= n`, and `ceil(n^(1/q))` is the smallest `r` with
//! `r^q >= n`. Other parameters fall back to floating point with a `1e-9`
//! nudge toward the integer above before rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NUDGE: f64 = 1e-9;

/// Context-length cap `K(n)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextSchedule {
    /// `max(1, floor(coef * log_|X| n))`.
    Log { coef: f64 },
    /// `K(n) = value` for every `n`.
    Constant { value: usize },
    /// Arbitrary function of `(n, alphabet_size)`. Not expressible in config files.
    #[serde(skip)]
    Custom(fn(u64, usize) -> usize),
}

/// Occurrence threshold `J(n)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSchedule {
    /// `max(1, ceil(n^exponent))`.
    Power { exponent: f64 },
    /// `J(n) = value` for every `n`.
    Constant { value: usize },
    /// `J(n) = n`. Violates `J(n)/n -> 0`; kept for stress runs.
    Identity,
    #[serde(skip)]
    Custom(fn(u64) -> usize),
}

impl Default for ContextSchedule {
    fn default() -> Self {
        ContextSchedule::Log { coef: 0.1 }
    }
}

impl Default for ThresholdSchedule {
    fn default() -> Self {
        ThresholdSchedule::Power { exponent: 0.5 }
    }
}

/// Whether a schedule pair meets `K -> inf`, `J -> inf` and `J(n)/n -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypotheses {
    Satisfied,
    Violated(String),
    /// Custom schedules cannot be inspected.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Schedules {
    #[serde(default)]
    pub context: ContextSchedule,
    #[serde(default)]
    pub threshold: ThresholdSchedule,
}

impl Schedules {
    pub fn new(context: ContextSchedule, threshold: ThresholdSchedule) -> Self {
        Schedules { context, threshold }
    }

    /// `K(n)`; always at least 1.
    pub fn context_len(&self, n: u64, alphabet_size: usize) -> Result<usize> {
        check_args(n, alphabet_size)?;
        let k = match self.context {
            ContextSchedule::Log { coef } => log_schedule(n, alphabet_size, coef),
            ContextSchedule::Constant { value } => value,
            ContextSchedule::Custom(f) => f(n, alphabet_size),
        };
        Ok(k.max(1))
    }

    /// `J(n)`; always at least 1.
    pub fn threshold(&self, n: u64) -> Result<usize> {
        if n == 0 {
            return Err(Error::domain("J(n) is defined for n >= 1"));
        }
        let j = match self.threshold {
            ThresholdSchedule::Power { exponent } => power_schedule(n, exponent),
            ThresholdSchedule::Constant { value } => value,
            ThresholdSchedule::Identity => usize::try_from(n).unwrap_or(usize::MAX),
            ThresholdSchedule::Custom(f) => f(n),
        };
        Ok(j.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        match self.context {
            ContextSchedule::Log { coef } if !(coef.is_finite() && coef > 0.0) => {
                return Err(Error::spec("schedules.context.log.coef", "must be finite and > 0"))
            }
            ContextSchedule::Constant { value: 0 } => {
                return Err(Error::spec("schedules.context.constant.value", "must be >= 1"))
            }
            _ => {}
        }
        match self.threshold {
            ThresholdSchedule::Power { exponent } if !(exponent.is_finite() && exponent >= 0.0) => Err(Error::spec(
                "schedules.threshold.power.exponent",
                "must be finite and >= 0",
            )),
            ThresholdSchedule::Constant { value: 0 } => {
                Err(Error::spec("schedules.threshold.constant.value", "must be >= 1"))
            }
            _ => Ok(()),
        }
    }

    /// The hypotheses under which `kappa_n -> inf` almost surely.
    pub fn divergence_hypotheses(&self) -> Hypotheses {
        let k_ok = match self.context {
            ContextSchedule::Log { .. } => Ok(()),
            ContextSchedule::Constant { .. } => Err("K(n) is constant, so K(n) does not tend to infinity"),
            ContextSchedule::Custom(_) => return Hypotheses::Unknown,
        };
        let j_ok = match self.threshold {
            ThresholdSchedule::Power { exponent } if exponent <= 0.0 => {
                Err("J(n) is bounded, so J(n) does not tend to infinity")
            }
            ThresholdSchedule::Power { exponent } if exponent >= 1.0 => Err("J(n)/n does not tend to 0"),
            ThresholdSchedule::Power { .. } => Ok(()),
            ThresholdSchedule::Constant { .. } => Err("J(n) is constant, so J(n) does not tend to infinity"),
            ThresholdSchedule::Identity => Err("J(n) = n, so J(n)/n does not tend to 0"),
            ThresholdSchedule::Custom(_) => return Hypotheses::Unknown,
        };
        match k_ok.and(j_ok) {
            Ok(()) => Hypotheses::Satisfied,
            Err(reason) => Hypotheses::Violated(reason.to_string()),
        }
    }
}

/// Default context cap, `max(1, floor(0.1 * log_|X| n))`.
pub fn schedule_k(n: u64, alphabet_size: usize) -> Result<usize> {
    Schedules::default().context_len(n, alphabet_size)
}

/// Default threshold, `max(1, ceil(sqrt(n)))`.
pub fn schedule_j(n: u64) -> Result<usize> {
    Schedules::default().threshold(n)
}

fn check_args(n: u64, alphabet_size: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("K(n) is defined for n >= 1"));
    }
    if alphabet_size < 2 {
        return Err(Error::domain(format!(
            "alphabet size must be >= 2, got {alphabet_size}"
        )));
    }
    Ok(())
}

/// Returns `q` if `x` is `1/q` for a positive integer `q` (to 1e-12).
fn reciprocal_integer(x: f64) -> Option<u64> {
    if x <= 0.0 {
        return None;
    }
    let q = (1.0 / x).round();
    if (1.0..1e9).contains(&q) && (x * q - 1.0).abs() < 1e-12 {
        Some(q as u64)
    } else {
        None
    }
}

fn log_schedule(n: u64, base: usize, coef: f64) -> usize {
    if let Some(q) = reciprocal_integer(coef) {
        // largest m with base^(q*m) <= n
        let base = base as u128;
        let n = n as u128;
        let mut m = 0usize;
        let mut power: u128 = 1;
        'outer: loop {
            for _ in 0..q {
                power = match power.checked_mul(base) {
                    Some(p) if p <= n => p,
                    _ => break 'outer,
                };
            }
            m += 1;
        }
        return m;
    }
    let v = coef * (n as f64).ln() / (base as f64).ln();
    (v + NUDGE).floor().max(0.0) as usize
}

fn power_schedule(n: u64, exponent: f64) -> usize {
    if exponent == 0.0 {
        return 1;
    }
    if let Some(q) = reciprocal_integer(exponent) {
        return ceil_root(n, q as u32) as usize;
    }
    let v = (n as f64).powf(exponent);
    (v - NUDGE).ceil().max(1.0) as usize
}

/// Smallest `r` with `r^q >= n`.
fn ceil_root(n: u64, q: u32) -> u64 {
    if q == 1 || n <= 1 {
        return n;
    }
    let reaches = |r: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..q {
            acc *= r as u128;
            if acc >= n as u128 {
                return true;
            }
        }
        acc >= n as u128
    };
    let guess = (n as f64).powf(1.0 / q as f64).ceil() as u64;
    let mut r = guess.max(1);
    while r > 1 && reaches(r - 1) {
        r -= 1;
    }
    while !reaches(r) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_context_examples() {
        assert_eq!(schedule_k(1024, 2).unwrap(), 1);
        assert_eq!(schedule_k(1 << 20, 2).unwrap(), 2);
        assert_eq!(schedule_k(1 << 30, 2).unwrap(), 3);
        assert_eq!(schedule_k(5, 2).unwrap(), 1);
    }

    #[test]
    fn default_context_is_exact_at_power_boundaries() {
        assert_eq!(schedule_k((1 << 20) - 1, 2).unwrap(), 1);
        assert_eq!(schedule_k((1 << 30) - 1, 2).unwrap(), 2);
        assert_eq!(schedule_k(3u64.pow(20), 3).unwrap(), 2);
        assert_eq!(schedule_k(3u64.pow(20) - 1, 3).unwrap(), 1);
        assert_eq!(schedule_k(u64::MAX, 2).unwrap(), 6);
    }

    #[test]
    fn default_threshold_examples() {
        assert_eq!(schedule_j(1).unwrap(), 1);
        assert_eq!(schedule_j(100).unwrap(), 10);
        assert_eq!(schedule_j(101).unwrap(), 11);
        assert_eq!(schedule_j(1 << 21).unwrap(), 1449);
        assert_eq!(schedule_j(u64::MAX).unwrap(), 1 << 32);
    }

    #[test]
    fn domain_errors() {
        assert!(schedule_k(0, 2).is_err());
        assert!(schedule_k(10, 1).is_err());
        assert!(schedule_j(0).is_err());
    }

    #[test]
    fn defaults_are_nondecreasing_and_grow() {
        let s = Schedules::default();
        for a in 2..=5usize {
            let mut grid: Vec<u64> = (0..63)
                .flat_map(|e| {
                    let n = 1u64 << e;
                    [n - 1, n, n + 1]
                })
                .chain((1..40).map(|e| (a as u64).saturating_pow(e)))
                .filter(|&n| n >= 1)
                .collect();
            grid.sort_unstable();
            let mut prev = (0, 0);
            for m in grid {
                let cur = (s.context_len(m, a).unwrap(), s.threshold(m).unwrap());
                assert!(cur.0 >= prev.0 && cur.1 >= prev.1, "a={a} n={m}");
                prev = cur;
            }
            assert!(prev.0 >= 2 && prev.1 > 1_000_000);
        }
    }

    #[test]
    fn float_fallback_paths() {
        let s = Schedules::new(
            ContextSchedule::Log { coef: 0.3 },
            ThresholdSchedule::Power { exponent: 0.6 },
        );
        // 0.3 * 10 = 3
        assert_eq!(s.context_len(1024, 2).unwrap(), 3);
        // 100^0.6 = 15.85
        assert_eq!(s.threshold(100).unwrap(), 16);
        // 32^0.6 = 8 exactly
        assert_eq!(s.threshold(32).unwrap(), 8);
    }

    #[test]
    fn hypotheses() {
        assert_eq!(Schedules::default().divergence_hypotheses(), Hypotheses::Satisfied);
        let s = Schedules::new(ContextSchedule::default(), ThresholdSchedule::Identity);
        assert!(matches!(s.divergence_hypotheses(), Hypotheses::Violated(_)));
        let s = Schedules::new(ContextSchedule::Constant { value: 2 }, ThresholdSchedule::default());
        assert!(matches!(s.divergence_hypotheses(), Hypotheses::Violated(_)));
        let s = Schedules::new(ContextSchedule::Custom(|_, _| 1), ThresholdSchedule::default());
        assert_eq!(s.divergence_hypotheses(), Hypotheses::Unknown);
    }

    #[test]
    fn ceil_root_matches_definition() {
        for n in 1..5000u64 {
            for q in 1..5u32 {
                let r = ceil_root(n, q);
                assert!(r.pow(q) >= n);
                assert!(r == 1 || (r - 1).pow(q) < n);
            }
        }
    }
}
