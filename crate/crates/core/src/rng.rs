//! Seeded randomness with a fixed, named algorithm.
//!
//! Every stochastic step in the crate draws from a [`SeededRng`] so that a
//! dataset, a training run, or a whole experiment is bit-reproducible from
//! its recorded seed. The generator is pinned to ChaCha12 rather than the
//! platform default; `rand_chacha` guarantees identical streams across
//! platforms and releases.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Identifier of the pinned generator, embedded in version strings and
/// dataset metadata.
pub const RNG_ALGORITHM: &str = "chacha12";

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha12Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child generator for an independent purpose. The label keeps streams
    /// for different purposes decorrelated even under equal seeds.
    pub fn derive(&self, label: &str) -> SeededRng {
        SeededRng::new(derive_seed(self.seed, label))
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// FNV-1a over the master seed and a purpose label. Hand-rolled because the
/// derivation must stay stable across Rust releases (std's hasher is not).
pub fn derive_seed(master: u64, label: &str) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    for byte in master.to_le_bytes().iter().chain(label.as_bytes()) {
        h ^= *byte as u64;
        h = h.wrapping_mul(PRIME);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_seed_produces_identical_stream() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_labels_give_different_children() {
        let root = SeededRng::new(7);
        let mut a = root.derive("graph");
        let mut b = root.derive("data");
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn derive_seed_is_stable() {
        // Frozen values (independent FNV-1a reference): the derivation
        // scheme is part of the data format.
        assert_eq!(derive_seed(0, ""), 0xa8c7f832281a39c5);
        assert_eq!(derive_seed(42, "x"), 0x3ae0d42f5f3e6e95);
    }
}
