//! Seeded pseudo-random streams.
//!
//! Every stream is xoshiro256** whose 256-bit state is filled from a 64-bit
//! seed by splitmix64. Both algorithms are published with reference C code,
//! so fixtures generated here can be replayed by any other implementation.
//! Floats are drawn as `(next_u64 >> 11) * 2^-53`, i.e. 53 uniform bits in
//! `[0, 1)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct Stream(Xoshiro256StarStar);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(Xoshiro256StarStar::seed_from_u64(seed))
    }

    /// Independent stream for trial `index` of a seeded batch. The result
    /// depends only on `(seed, index)`, never on scheduling.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        Stream::new(seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `lo..=hi`. Uses rejection to avoid modulo bias.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        if span == 0 {
            return lo + self.next_u64() as usize;
        }
        let zone = u64::MAX - (u64::MAX % span + 1) % span;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return lo + (v % span) as usize;
            }
        }
    }
}
