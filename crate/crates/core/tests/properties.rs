use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lazyset::eval::reduce;
use lazyset::harness::generate;
use lazyset::oracle::{enumerate, find_counterexample, member, EnumBounds};
use lazyset::typegen::random_type;
use lazyset::types::print_type;
use lazyset::{compile, parse_type, BuildMode, TypeId, TypeStore};

fn types<const N: usize>(s: &TypeStore, seed: u64, depth: usize) -> [TypeId; N] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [(); N].map(|_| random_type(s, &mut rng, depth))
}

fn small_bounds() -> EnumBounds {
    EnumBounds {
        budget: 300,
        ..EnumBounds::new(2, lazyset::oracle::default_pool(), 1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boolean_algebra(seed in any::<u64>()) {
        let s = TypeStore::new();
        let [a, b, c] = types(&s, seed, 3);
        prop_assert!(s.subtype(a, a));
        prop_assert!(s.subtype(a, s.or(a, b)));
        prop_assert!(s.subtype(s.and(a, b), a));
        prop_assert!(s.is_empty(s.and(a, s.neg(a))));
        prop_assert!(s.equiv(s.neg(s.neg(a)), a));
        prop_assert!(s.equiv(s.neg(s.or(a, b)), s.and(s.neg(a), s.neg(b))));
        prop_assert!(s.equiv(s.and(a, s.or(b, c)), s.or(s.and(a, b), s.and(a, c))));
        if s.subtype(a, b) && s.subtype(b, c) {
            prop_assert!(s.subtype(a, c));
        }
    }

    #[test]
    fn constructors_are_monotone(seed in any::<u64>()) {
        let s = TypeStore::new();
        let [a, b, c] = types(&s, seed, 2);
        let ab = s.or(a, b);
        prop_assert!(s.subtype(s.prod(a, c), s.prod(ab, c)));
        prop_assert!(s.subtype(s.arrow(c, a), s.arrow(c, ab)));
        prop_assert!(s.subtype(s.arrow(ab, c), s.arrow(a, c)));
    }

    #[test]
    fn normal_form_preserves_meaning(seed in any::<u64>()) {
        let s = TypeStore::new();
        let [a] = types(&s, seed, 4);
        prop_assert!(s.equiv(s.dnf_type(&s.dnf(a)), a));
        let split = s.kind_split(a);
        let lines = [&split.bot, &split.basic, &split.prod, &split.arrow];
        let back = s.or_all(lines.iter().flat_map(|ls| ls.iter().map(|l| s.line_type(l))));
        prop_assert!(s.equiv(back, a));
    }

    #[test]
    fn printed_types_parse_back(seed in any::<u64>()) {
        let s = TypeStore::new();
        let [a] = types(&s, seed, 4);
        let printed = print_type(&s, a);
        let back = parse_type(&s, &printed, BuildMode::Raw).unwrap();
        prop_assert!(s.equiv(a, back), "{}", printed);
    }

    #[test]
    fn membership_respects_negation(seed in any::<u64>()) {
        let s = TypeStore::new();
        let [a] = types(&s, seed, 3);
        let na = s.neg(a);
        for d in enumerate(&small_bounds()).take(200) {
            prop_assert_ne!(member(&s, &d, a), member(&s, &d, na), "{}", d);
        }
    }

    #[test]
    fn subtypes_have_no_counterexample(seed in any::<u64>()) {
        let s = TypeStore::new();
        let [a, b] = types(&s, seed, 3);
        let holds = s.subtype(a, b);
        let witness = find_counterexample(&s, a, b, &small_bounds());
        if holds {
            prop_assert!(witness.is_none(), "{:?}", witness);
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed in 0u64..10_000, size in 1usize..12) {
        let s = TypeStore::new();
        let e = compile(&generate(&s, seed, size));
        let r1 = reduce(&s, &e, 2_000);
        let r2 = reduce(&s, &e, 2_000);
        prop_assert_eq!(r1, r2);
    }
}
