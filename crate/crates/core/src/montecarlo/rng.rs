//! Counter-based random streams.
//!
//! Iteration `k` of an experiment with seed `s` draws from ChaCha8 keyed by `s`
//! on stream `k`, so its samples depend on `(s, k)` alone and never on how
//! iterations are split across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_stream(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// Mixes a sub-experiment tag into a seed (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
