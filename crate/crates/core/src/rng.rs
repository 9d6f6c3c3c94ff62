//! Seed derivation.
//!
//! An experiment has one master seed. Every random stream is keyed off it
//! with [`derive_seed`]: environment tables use [`ENVIRONMENT_STREAM`], reward
//! draws use [`REWARD_STREAM`], and the index selects the repetition. Shared
//! environment mode always uses environment index 0. Every generator is a
//! `ChaCha8Rng` seeded with `seed_from_u64`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub const ENVIRONMENT_STREAM: u64 = 0x656e_7669_726f_6e00;
pub const REWARD_STREAM: u64 = 0x7265_7761_7264_7300;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(master ^ stream) ^ index)`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ stream) ^ index)
}

pub fn environment_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, ENVIRONMENT_STREAM, index)
}

pub fn reward_seed(master: u64, run: u64) -> u64 {
    derive_seed(master, REWARD_STREAM, run)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
