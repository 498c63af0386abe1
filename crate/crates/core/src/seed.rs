//! Stateless seed derivation.
//!
//! Stream `i` of a master seed takes the `i`-th output of a SplitMix64
//! sequence started at the master seed. The finalizer is a bijection on
//! `u64` and the states `master + (i + 1) * GAMMA` are distinct for all
//! `i < 2^64`, so derived seeds never collide.

use rand::SeedableRng;
use rayon::prelude::*;

use crate::process::SimRng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Samples per independent stream in chunked Monte Carlo loops.
pub const MC_CHUNK: u64 = 4096;

/// Runs `n` trials split into fixed chunks, each with its own derived stream,
/// and folds the per-chunk results in chunk order. The result does not depend
/// on the number of worker threads.
pub(crate) fn chunked_monte_carlo<T, F>(n: u64, seed: u64, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SimRng, u64) -> T + Sync,
{
    let chunks = n.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = SimRng::seed_from_u64(derive_seed(seed, c));
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            per_chunk(&mut rng, len)
        })
        .collect()
}
