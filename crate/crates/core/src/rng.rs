//! Deterministic seeding for the multistart searches.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// FNV-1a over a stream of 64-bit words.
#[derive(Debug, Clone)]
pub(crate) struct SeedHasher(u64);

impl SeedHasher {
    pub(crate) fn new() -> Self {
        SeedHasher(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn word(&mut self, w: u64) -> &mut Self {
        for b in w.to_le_bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self
    }

    pub(crate) fn float(&mut self, x: f64) -> &mut Self {
        // −0.0 and 0.0 hash alike.
        self.word(if x == 0.0 { 0 } else { x.to_bits() })
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}

pub(crate) struct Uniform(ChaCha8Rng);

impl Uniform {
    pub(crate) fn seeded(seed: u64) -> Self {
        Uniform(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)`.
    pub(crate) fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub(crate) fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
