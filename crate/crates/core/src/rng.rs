//! Named, reproducible random streams.
//!
//! Every stage that needs randomness (splitting, weight init, dropout,
//! batch order) derives its own stream from the single pipeline seed, so
//! changing how much randomness one stage consumes never perturbs the
//! others.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive a 64-bit sub-seed from the master seed and a stream name.
///
/// FNV-1a over the name, mixed with the master seed through the
/// SplitMix64 finalizer. Stable across platforms and releases.
pub fn stream_seed(master: u64, stream: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in stream.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(master ^ h)
}

/// Seeded ChaCha stream for the given stage.
pub fn stream_rng(master: u64, stream: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, stream))
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
