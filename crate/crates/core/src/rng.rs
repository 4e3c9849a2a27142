//! Counter-based seed derivation.
//!
//! Every Monte Carlo replicate `i` draws from its own ChaCha8 stream keyed by
//! the master seed, so a replicate's random numbers never depend on which
//! worker ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent child seed from `(master, index)`.
pub fn split(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ mix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Derive a seed for a named sub-domain (e.g. "limit model" vs "matrix process")
/// so that two families of replicates sharing a master seed stay independent.
pub fn domain(master: u64, tag: &str) -> u64 {
    tag.bytes().fold(mix64(master), |acc, b| mix64(acc ^ u64::from(b)))
}

/// The generator for replicate `index` under `master`.
pub fn stream(master: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// A generator seeded directly from a single seed (stream 0).
pub fn from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}
