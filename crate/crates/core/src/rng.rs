//! Deterministic, splittable random streams.
//!
//! Every random decision in the toolkit is drawn from a [`SeedStream`]: a
//! ChaCha20 keystream whose 256-bit key is `master_seed ‖ domain ‖ 0…` (both
//! little-endian `u64`) and whose 64-bit stream id is `(a << 32) | b`. Streams
//! with different `(domain, a, b)` are independent, and a stream's output does
//! not depend on how many other streams were drawn before it or on which
//! thread draws it.
//!
//! Bounded integers use Lemire's multiply-and-reject method on `next_u64`, and
//! shuffles are a descending Fisher–Yates. Both are implemented here rather
//! than borrowed from `rand` so the sequences stay fixed across dependency
//! upgrades; `tests/golden.rs` pins them.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Domain tags keep streams used for different purposes apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Permutation = 1,
    Injection = 2,
    Synthetic = 3,
    Lexicon = 4,
    Derive = 5,
}

pub struct SeedStream {
    rng: ChaCha20Rng,
}

impl SeedStream {
    pub fn new(master_seed: u64, domain: Domain, a: u32, b: u32) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(((a as u64) << 32) | b as u64);
        Self { rng }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `0..bound`. `bound` must be non-zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        let mut m = (self.next_u64() as u128) * (bound as u128);
        if (m as u64) < bound {
            let threshold = bound.wrapping_neg() % bound;
            while (m as u64) < threshold {
                m = (self.next_u64() as u128) * (bound as u128);
            }
        }
        (m >> 64) as u64
    }

    /// Uniform double in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Derives a child seed from a parent seed and a path of labels.
///
/// Used to give each experiment row (run seed × dataset × test) its own
/// master seed without the rows sharing streams.
pub fn derive_seed(parent: u64, path: &[u64]) -> u64 {
    let mut acc = parent;
    for (i, &label) in path.iter().enumerate() {
        let mut stream = SeedStream::new(acc, Domain::Derive, i as u32, 0);
        acc = stream.next_u64() ^ splitmix(label);
        acc = SeedStream::new(acc, Domain::Derive, i as u32, 1).next_u64();
    }
    acc
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
