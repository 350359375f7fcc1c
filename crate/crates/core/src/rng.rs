//! Seed derivation and counter-based uniforms.
//!
//! Every random quantity in the lab is a pure function of a 64-bit seed and
//! a small tuple of counters. Trial streams are `ChaCha8Rng` instances keyed
//! by [`derive_seed`]; codebook letters use [`keyed_uniform`] so any letter
//! can be recomputed in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over the tag bytes.
pub fn tag_hash(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Absorbs `words` into `seed` one at a time through the SplitMix64 finalizer.
pub fn hash_words(seed: u64, words: &[u64]) -> u64 {
    let mut h = mix64(seed.wrapping_add(GOLDEN));
    for &w in words {
        h = mix64(h ^ w.wrapping_add(GOLDEN));
    }
    h
}

/// Stable seed for stream `index` under `tag`:
/// `hash_words(master, [fnv1a(tag), index])`.
pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    hash_words(master, &[tag_hash(tag), index])
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Maps the top 53 bits of a hash to `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counter-based uniform for codeword letter `(m, m', t)` under `seed`.
#[inline]
pub fn keyed_uniform(seed: u64, m: u64, mprime: u64, t: u64) -> f64 {
    unit_f64(hash_words(seed, &[m, mprime, t]))
}
