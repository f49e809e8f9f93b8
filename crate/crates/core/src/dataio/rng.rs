//! Seeded generator behind every random choice in the crate.
//!
//! The stream is xoshiro256** whose 256-bit state is filled from the 64-bit
//! seed by SplitMix64 (the reference seeding procedure of the xoshiro
//! authors). Derived draws use only integer arithmetic or the top 53 bits of
//! a word, so any language reproduces the same sequence:
//!
//! * `below(n)`: draw words `x` until `x >= (2^64 - n) mod n`, return `x mod n`.
//! * `unit()`: `(x >> 11) * 2^-53`, uniform on `[0, 1)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: Xoshiro256StarStar,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[0, bound)`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
