//! Seed derivation for independent, order-free random streams.
//!
//! Every random quantity in an experiment is drawn from its own ChaCha stream
//! keyed by `(master_seed, path...)`, so parallel execution order never
//! changes results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of entity identifiers into a child seed.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &id| {
        splitmix64(acc ^ splitmix64(id))
    })
}

/// A ChaCha8 generator for the stream at `path` below `master`.
pub fn stream(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, path))
}
