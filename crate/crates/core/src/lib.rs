//! Forward estimation of `E[g(X_{n+1}) | X_0..=X_n]` for stationary ergodic
//! finite-alphabet sources.
//!
//! The estimator looks for the longest recent context (up to `K(n)` symbols)
//! that has already occurred at least `J(n)` times, and averages `g` over the
//! symbols that followed those earlier occurrences.
//!
//! * [`estimator`] evaluates it from scratch by scanning the segment.
//! * [`index::StreamingEstimator`] maintains it online in `O(K)` per symbol.
//! * [`process`] provides sources with exact conditional oracles.
//! * [`harness`] runs Monte Carlo consistency experiments and the
//!   recurrence-time checks.

pub mod alphabet;
pub mod config;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod index;
pub mod payoff;
pub mod process;
pub mod report;
pub mod rng;
pub mod schedule;
pub mod verify;

pub use alphabet::{Alphabet, SymbolSequence};
pub use error::{Error, Result};
pub use estimator::{
    d_star, estimate, estimate_distribution, kappa, lambda, recurrence_times, DistributionEstimate, EstimateResult,
};
pub use index::{BlockKey, BlockStats, StreamingEstimator};
pub use payoff::PayoffFunction;
pub use process::{Oracle, Process, ProcessSpec, Trajectory};
pub use schedule::{schedule_j, schedule_k, ContextSchedule, Schedules, ThresholdSchedule};
