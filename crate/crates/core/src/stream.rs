//! Seed derivation for reproducible, order-independent random streams.
//!
//! Every random stream in the crate is a ChaCha8 generator whose seed is
//! derived from a master seed and a short path of integers (cell, trial, ...)
//! by repeated SplitMix64 finalization. Derivation is stateless, so a stream
//! can be reconstructed from its path alone regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream type used for sampling.
pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a 64-bit seed from `master` and a path of integers.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(master.wrapping_add(GOLDEN_GAMMA)), |acc, &p| {
        mix64(acc ^ mix64(p.wrapping_add(GOLDEN_GAMMA)))
    })
}

/// A stream seeded from `derive(master, path)`.
pub fn substream(master: u64, path: &[u64]) -> Stream {
    Stream::seed_from_u64(derive(master, path))
}
