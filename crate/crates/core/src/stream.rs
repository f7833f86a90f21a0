//! Seeded bit streams.
//!
//! Every random choice in the crate is drawn from a [`RandomStream`]. A stream
//! is a pure function of its 64-bit seed, and sub-tasks get their own stream
//! through [`RandomStream::split`], whose seed is derived from the parent seed
//! and a text label only. Splitting never advances the parent.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use crate::bits::BitString;

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    position: u64,
    rng: ChaCha8Rng,
    word: u64,
    word_bits: u32,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            position: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            word: 0,
            word_bits: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of bits drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    /// An independent stream determined by `(self.seed, label)`.
    pub fn split(&self, label: &str) -> RandomStream {
        RandomStream::new(derive_seed(self.seed, label))
    }

    pub fn next_bit(&mut self) -> bool {
        if self.word_bits == 0 {
            self.word = self.rng.next_u64();
            self.word_bits = 64;
        }
        let bit = self.word >> 63 == 1;
        self.word <<= 1;
        self.word_bits -= 1;
        self.position += 1;
        bit
    }

    pub fn next_bits(&mut self, len: usize) -> BitString {
        (0..len).map(|_| self.next_bit()).collect()
    }

    /// `k` bits read as a big-endian integer, `k <= 64`.
    pub fn next_u64_bits(&mut self, k: u32) -> u64 {
        debug_assert!(k <= 64);
        (0..k).fold(0u64, |acc, _| (acc << 1) | self.next_bit() as u64)
    }

    /// Uniform integer in `0..bound` by rejection on `ceil(log2 bound)`-bit
    /// draws.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        if bound == 1 {
            return 0;
        }
        let width = 64 - (bound - 1).leading_zeros();
        loop {
            let v = self.next_u64_bits(width);
            if v < bound {
                return v;
            }
        }
    }
}

/// Child seed for a labelled split.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(head)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn position_counts_bits() {
        let mut s = RandomStream::new(7);
        s.next_bits(70);
        assert_eq!(s.position(), 70);
        s.next_bit();
        assert_eq!(s.position(), 71);
    }

    #[test]
    fn split_is_a_function_of_seed_and_label() {
        let mut parent = RandomStream::new(3);
        let a = parent.split("leak").next_bits(32);
        parent.next_bits(10);
        let b = parent.split("leak").next_bits(32);
        assert_eq!(a, b);
        let c = parent.split("attacker").next_bits(32);
        assert_ne!(a, c);
    }

    #[test]
    fn below_stays_in_range() {
        let mut s = RandomStream::new(11);
        let mut seen = [false; 5];
        for _ in 0..200 {
            let v = s.below(5) as usize;
            assert!(v < 5);
            seen[v] = true;
        }
        assert!(seen.iter().all(|&b| b));
        assert_eq!(s.below(1), 0);
    }

    proptest! {
        #[test]
        fn equal_seeds_replay(seed in any::<u64>(), len in 0usize..300) {
            let a = RandomStream::new(seed).next_bits(len);
            let b = RandomStream::new(seed).next_bits(len);
            prop_assert_eq!(a, b);
        }
    }
}
