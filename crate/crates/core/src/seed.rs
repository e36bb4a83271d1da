//! Seed derivation for independent, scheduling-free random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags used when deriving child seeds.
pub mod stream {
    pub const GENERATOR_INIT: u64 = 1;
    pub const DISCRIMINATOR_INIT: u64 = 2;
    pub const TRAINING: u64 = 3;
    pub const SAMPLING: u64 = 4;
    pub const CLASSIFIER: u64 = 5;
    /// Offset added to a class index to form its stream tag.
    pub const CLASS_BASE: u64 = 1 << 32;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a parent seed and a stream tag into a child seed.
///
/// `derive(s, a) != derive(s, b)` for `a != b` with overwhelming probability,
/// and the mapping is a pure function of its inputs.
pub fn derive(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// Seed for the GAN of the class at `class_index` in `class_labels` order.
pub fn class_seed(random_seed: u64, class_index: usize) -> u64 {
    derive(random_seed, stream::CLASS_BASE + class_index as u64)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
