//! Workloads shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lazyset::typegen::random_type;
use lazyset::{TypeId, TypeStore};

/// `n` random pairs of types of depth `depth`, reproducible from `seed`.
pub fn type_pairs(store: &TypeStore, seed: u64, n: usize, depth: usize) -> Vec<(TypeId, TypeId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                random_type(store, &mut rng, depth),
                random_type(store, &mut rng, depth),
            )
        })
        .collect()
}
