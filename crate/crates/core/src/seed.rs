//! Deterministic seed derivation for replicated experiments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `(label, index)` under `master`; distinct labels and
/// indices give unrelated seeds, independent of evaluation order.
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h = splitmix64(master);
    for &byte in label.as_bytes() {
        h = splitmix64(h ^ byte as u64);
    }
    splitmix64(h ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// The generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
