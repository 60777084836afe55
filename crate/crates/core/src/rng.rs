//! Seeded random streams.
//!
//! Every simulation draw comes from [`SimRng`], ChaCha8 as implemented by
//! `rand_chacha` 0.9. Independent tasks never share a generator: each one
//! derives its own seed from the run's base seed and a task key (grid
//! coordinates, run index, purpose tag) with [`seed_key`], which folds the key
//! words through the SplitMix64 finalizer. The derivation depends only on the
//! key, so results do not depend on scheduling or thread count.

use rand::SeedableRng;

pub type SimRng = rand_chacha::ChaCha8Rng;

/// Identifies the generator and stream-splitting rule in experiment output.
pub const RNG_NAME: &str = "chacha8 (rand_chacha 0.9), splitmix64 key folding v1";

/// Key tags that keep the codebook stream separate from the round stream.
pub const TAG_CODEBOOK: u64 = 0xC0DE_B00C;
pub const TAG_ROUNDS: u64 = 0x0000_5EED;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit seed for `(base, key...)`.
pub fn seed_key(base: u64, key: &[u64]) -> u64 {
    key.iter()
        .fold(splitmix64(base), |h, &k| splitmix64(h ^ splitmix64(k)))
}

/// Generator for the substream identified by `key`.
pub fn substream(base: u64, key: &[u64]) -> SimRng {
    SimRng::seed_from_u64(seed_key(base, key))
}

/// Encodes a real grid coordinate as a key word.
pub fn coord_key(x: f64) -> u64 {
    // normalize -0.0 so that equal coordinates share a stream
    (x + 0.0).to_bits()
}
