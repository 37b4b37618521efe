//! Seed derivation: master seed → series seed → match seed, plus the independent
//! streams a match needs. Any match can be replayed from its own seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed `index` of `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_mul(0xD6E8_FEB8_6659_FD93)))
}

/// Stream used to shuffle the deck of the match seeded with `match_seed`.
pub fn deck_rng(match_seed: u64) -> SimRng {
    SimRng::seed_from_u64(match_seed)
}

/// Stream agents draw from while playing the match seeded with `match_seed`.
pub fn agent_rng(match_seed: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(match_seed, 1))
}

pub fn rng_from(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
