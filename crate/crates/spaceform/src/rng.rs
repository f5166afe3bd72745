//! Seeded, shardable random number generation.
//!
//! Every randomized routine in the crate draws from [`ChaCha8Rng`] seeded
//! with [`SeedableRng::seed_from_u64`] and sharded by stream index. Two
//! shards with the same seed and different stream indices are independent,
//! which lets parallel workers draw reproducibly regardless of schedule.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for `(seed, shard)`.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}
