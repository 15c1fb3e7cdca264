//! Seed derivation for the deterministic pipeline.
//!
//! Every randomized stage draws from its own generator whose seed is derived
//! from the run seed and a fixed salt. Results therefore do not depend on
//! evaluation order or on how work is split across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mixes a salt into a base seed with a splitmix64 finalizer.
pub(crate) fn derive_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha8 is pinned so that seeded streams stay stable across dependency
/// upgrades, unlike `StdRng` which may change algorithm between releases.
pub(crate) fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
