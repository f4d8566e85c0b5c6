//! Deterministic seed derivation.
//!
//! Parallel Monte Carlo partitions the sample index range into fixed-size
//! chunks; each chunk draws from its own generator seeded by a mix of the
//! user seed and the chunk coordinates. Results are therefore bitwise
//! independent of the number of worker threads.

/// SplitMix64 finalizer over the combined words.
pub(crate) fn mix_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z =
        base ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
