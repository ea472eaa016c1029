//! Random types for property tests and benchmarks.

use rand::Rng;

use crate::types::{TypeId, TypeStore};

/// A random raw type of depth at most `depth`, over the default constants
/// `0, 1, 2, true, false` and the basic kinds.
pub fn random_type<R: Rng>(store: &TypeStore, rng: &mut R, depth: usize) -> TypeId {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return random_leaf(store, rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => store.prod(random_type(store, rng, d), random_type(store, rng, d)),
        1 => store.arrow(random_type(store, rng, d), random_type(store, rng, d)),
        2 | 3 => store.or(random_type(store, rng, d), random_type(store, rng, d)),
        4 => store.and(random_type(store, rng, d), random_type(store, rng, d)),
        5 => store.neg(random_type(store, rng, d)),
        _ => store.diff(random_type(store, rng, d), random_type(store, rng, d)),
    }
}

pub fn random_leaf<R: Rng>(store: &TypeStore, rng: &mut R) -> TypeId {
    match rng.gen_range(0..10) {
        0 => store.int(),
        1 => store.boolean(),
        2 => store.int_lit(0),
        3 => store.int_lit(1),
        4 => store.int_lit(2),
        5 => store.bool_lit(true),
        6 => store.bool_lit(false),
        7 => store.bot(),
        8 => store.any(),
        _ => store.empty(),
    }
}

/// A random intersection of 1 to `max_arrows` plain arrows, as `(dom, cod)` pairs.
pub fn random_arrows<R: Rng>(
    store: &TypeStore,
    rng: &mut R,
    max_arrows: usize,
    depth: usize,
) -> Vec<(TypeId, TypeId)> {
    let n = rng.gen_range(1..=max_arrows.max(1));
    (0..n)
        .map(|_| {
            (
                random_type(store, rng, depth),
                random_type(store, rng, depth),
            )
        })
        .collect()
}
