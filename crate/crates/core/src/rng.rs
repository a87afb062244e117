//! Seeded random streams.
//!
//! A single 64-bit seed is expanded into independent ChaCha streams keyed by
//! a domain string and an index, so parallel workers never share a generator
//! and results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Generator for `(seed, domain, index)`.
pub fn stream(seed: u64, domain: &str, index: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(splitmix64(seed ^ fnv1a(domain)));
    rng.set_stream(index);
    rng
}

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
