//! Shared inputs for the benchmarks.

use fwdest::{Alphabet, Process, ProcessSpec};

/// Order-2 binary chain used throughout the benches.
pub fn order2_chain() -> Process {
    Process::new(
        Alphabet::numeric(2).unwrap(),
        ProcessSpec::Markov {
            order: 2,
            transitions: vec![vec![0.9, 0.1], vec![0.6, 0.4], vec![0.4, 0.6], vec![0.1, 0.9]],
        },
    )
    .unwrap()
}

pub fn sample(process: &Process, seed: u64, len: usize) -> Vec<u8> {
    process.sampler(seed).take(len).collect()
}
