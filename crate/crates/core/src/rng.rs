//! Reproducible randomness.
//!
//! Every random choice in the crate is drawn from SplitMix64 (Steele, Lea and
//! Flood): the state advances by the constant `0x9E3779B97F4A7C15` and each
//! output is the state passed through the finalizer with multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` (shifts 30, 27, 31). The
//! generator is counter based, so a seed reproduces the same stream in any
//! language. Floats take the top 53 bits of an output.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Seeded stream used by generators and randomized rounding.
#[derive(Clone, Debug)]
pub struct Rng {
    inner: SplitMix64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Independent stream for sub-task `index` of a run seeded with `seed`.
    /// The derived seed is the first output of a generator seeded with
    /// `seed ^ (index * 0x9E3779B97F4A7C15)`.
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut base = Rng::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Rng::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}
