//! Deterministic random streams.
//!
//! Every random draw goes through ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Independent streams are selected with
//! `set_stream`:
//!
//! - sequence `i` of length `m` uses stream `(m << 32) | i`, so each
//!   `(seed, m, i)` triple sees the same numbers no matter how the work is split
//!   across threads;
//! - auxiliary draws (noise sampling, schedule construction) use stream
//!   `k` with `m = 0`, a range that sequence streams never touch.
//!
//! Both `m` and `i` must fit in 32 bits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as SimRng;

/// Stream for sequence `i` of length `m`.
pub fn sequence_rng(seed: u64, m: usize, i: usize) -> ChaCha8Rng {
    debug_assert!(m > 0 && m <= u32::MAX as usize && i <= u32::MAX as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m as u64) << 32) | (i as u64 & 0xffff_ffff));
    rng
}

/// Auxiliary stream `k`, disjoint from every sequence stream.
pub fn auxiliary_rng(seed: u64, k: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(k));
    rng
}
