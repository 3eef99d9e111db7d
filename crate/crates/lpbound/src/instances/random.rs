//! Seeded random instance corpora. Everything here is deterministic given
//! the seed: the stream cipher RNG guarantees identical corpora across
//! platforms and runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{CommInstance, QueryInstance};

/// `count` total Boolean `nrows x ncols` matrices drawn from `seed`.
pub fn comm_corpus(
    nrows: usize,
    ncols: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<CommInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let values: Vec<Option<u16>> = (0..nrows * ncols)
                .map(|_| Some(u16::from(rng.gen::<bool>())))
                .collect();
            CommInstance::from_values(nrows, ncols, 2, &values)
        })
        .collect()
}

/// `count` total Boolean functions on `n` variables drawn from `seed`.
pub fn query_corpus(n: usize, seed: u64, count: usize) -> Result<Vec<QueryInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let truth: Vec<bool> = (0..1u32 << n).map(|_| rng.gen::<bool>()).collect();
            QueryInstance::boolean(n, &truth)
        })
        .collect()
}
