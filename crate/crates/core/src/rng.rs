//! Reproducible randomness.
//!
//! Trajectories are driven by ChaCha8 (`rand_chacha` 0.3, which guarantees
//! value stability across platforms). A 64-bit seed is expanded into the
//! 256-bit ChaCha key with SplitMix64, and per-replicate seeds are derived
//! from a base seed the same way, so neighbouring replicate ids never share
//! raw seeds.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3+splitmix64-seed";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output for the given state.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `replicate` under `base_seed`.
pub fn derive_seed(base_seed: u64, replicate: u64) -> u64 {
    splitmix64(splitmix64(base_seed) ^ replicate.wrapping_mul(GOLDEN_GAMMA))
}

#[derive(Clone, Debug)]
pub struct SimRng {
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            let word = splitmix64(state);
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        SimRng {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Index drawn from a probability vector by inverse CDF in index order.
    /// Rounding slack at the top goes to the last index with positive mass.
    pub fn categorical(&mut self, probs: &[f64]) -> usize {
        let u = self.next_f64();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last = i;
                if u < acc {
                    return i;
                }
            }
        }
        last
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference SplitMix64 stream seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(GOLDEN_GAMMA), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn stream_is_frozen() {
        let mut a = SimRng::new(42);
        let mut b = SimRng::new(42);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(SimRng::new(43).next_u64(), xs[0]);
        let mut zero = SimRng::new(0);
        assert_eq!(zero.next_u64(), 0xbf94_d133_2d8e_e5e8);
        assert_eq!(zero.next_u64(), 0x3a73_8775_a6da_5a01);
        assert_eq!(derive_seed(0, 0), 12_035_550_249_420_947_055);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|r| derive_seed(7, r)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn categorical_skips_zero_mass() {
        let mut r = SimRng::new(1);
        for _ in 0..1000 {
            assert_eq!(r.categorical(&[0.0, 1.0, 0.0]), 1);
        }
    }
}
