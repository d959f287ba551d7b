//! Seed derivation. Every random choice in the pipeline draws from a ChaCha
//! stream whose seed is a hash of the master seed and a task label, so results
//! never depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Derives a child seed from `base`, a task label and an index.
pub fn derive(base: u64, label: &str, index: u64) -> u64 {
    // FNV-1a over the label, then SplitMix64 finalization of each part.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in label.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut state = mix(base);
    state = mix(state ^ h);
    mix(state ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
