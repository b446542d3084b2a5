//! Replication driver: data-parallel map over replication indices.
//!
//! Every replication derives its own RNG substream from `(seed, index)`, so
//! the parallel and sequential paths produce identical results and the
//! thread count never matters. The sequential body is always compiled; the
//! `parallel` feature adds the rayon dispatch on top.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Independent RNG substream for one replication of a seeded experiment.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sequential map over replication indices.
pub fn map_replications_seq<T, E, F>(count: usize, f: F) -> Result<Vec<T>, E>
where
    F: Fn(usize) -> Result<T, E>,
{
    (0..count).map(f).collect()
}

/// Map over replication indices, in parallel when the feature is enabled.
/// Output order is by index either way.
#[cfg(feature = "parallel")]
pub fn map_replications<T, E, F>(count: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_replications<T, E, F>(count: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_replications_seq(count, f)
}
