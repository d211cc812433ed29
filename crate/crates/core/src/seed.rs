//! Seed derivation. Every random choice in the toolkit is drawn from a
//! ChaCha8 stream whose seed is a pure function of the master seed, a label
//! and integer indices, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed for the job `(label, indices)` under `master`.
pub fn derive(master: u64, label: &str, indices: &[u64]) -> u64 {
    let mut h = splitmix(master ^ fnv1a(label));
    for &i in indices {
        h = splitmix(h ^ splitmix(i));
    }
    h
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
