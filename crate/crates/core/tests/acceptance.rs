//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Thresholds below are fixed.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lazyset::eval::{reduce_with, shared_bound_steps, step, Rule, StepOutcome};
use lazyset::harness::{self, Corpus, RunConfig, RunOutcome};
use lazyset::oracle::{cross_check, EnumBounds, Verdict};
use lazyset::subtype::{interface_disjoint, make_fully_disjoint};
use lazyset::typecheck::{CheckVerdict, Checker, SplitStrategy};
use lazyset::typegen::{random_arrows, random_type};
use lazyset::{
    compile, display_type, parse_internal, parse_source, parse_type, BuildMode, CheckOptions, Expr,
    ParseOptions, TypeEnv, TypeId, TypeStore,
};

const LAWS_LIMIT: Duration = Duration::from_secs(5);
const SUBSETS_LIMIT: Duration = Duration::from_secs(5);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const DISJOINT_LIMIT: Duration = Duration::from_secs(10);
const FUZZ_LIMIT: Duration = Duration::from_secs(300);

const LAW_SAMPLES: usize = 100;
const LIFT_SAMPLES: usize = 1000;
const SUBSET_FAMILIES: usize = 200;
const ORACLE_PAIRS: usize = 10_000;
const ORACLE_TYPE_DEPTH: usize = 4;
const WITNESS_DEPTH: usize = 3;
const DISJOINT_SAMPLES: usize = 200;
const FUZZ_PROGRAMS: usize = 500;
const FUZZ_SEED: u64 = 0;
const FUZZ_SIZE: usize = 10;
const FUZZ_FUEL: usize = 10_000;
const NEG_MAX_STEPS: usize = 25;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn ty(s: &TypeStore, src: &str) -> TypeId {
    parse_type(s, src, BuildMode::Raw).unwrap()
}

fn source(s: &TypeStore, src: &str) -> Expr {
    parse_source(s, src, ParseOptions::default()).unwrap()
}

fn curated(id: &str) -> String {
    Corpus::curated()
        .programs
        .into_iter()
        .find(|e| e.id == id)
        .unwrap()
        .source
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > limit {
        o.ok = false;
    }
    o.detail = format!("{} [{:.2?} of {:.0?}]", o.detail, took, limit);
    o
}

fn subtyping_laws() -> Outcome {
    let s = TypeStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = Vec::new();
    if !s.subtype(
        ty(&s, "(Int -> Int) & (Bool -> Bool)"),
        ty(&s, "(Int | Bool) -> (Int | Bool)"),
    ) {
        bad.push("overloaded arrows".to_string());
    }
    for i in 0..LAW_SAMPLES {
        let (t, t1, t2) = (
            random_type(&s, &mut rng, 3),
            random_type(&s, &mut rng, 3),
            random_type(&s, &mut rng, 3),
        );
        let lhs = s.and(s.arrow(t, t1), s.arrow(t, t2));
        if !s.subtype(lhs, s.arrow(t, s.and(t1, t2))) {
            bad.push(format!("arrow intersection #{i}"));
        }
    }
    for i in 0..LAW_SAMPLES {
        let [a, b, c, d] = [0; 4].map(|_| random_type(&s, &mut rng, 3));
        let lhs = s.or(s.prod(a, b), s.prod(c, d));
        if !s.subtype(lhs, s.prod(s.or(a, c), s.or(b, d))) {
            bad.push(format!("product union #{i}"));
        }
    }
    if !s.equiv(ty(&s, "Empty * Int"), s.empty()) {
        bad.push("Empty * Int".into());
    }
    if !s.equiv(ty(&s, "Empty -> Int"), ty(&s, "Empty -> Bool")) {
        bad.push("Empty -> Int".into());
    }
    if s.equiv(ty(&s, "Bot * Int"), ty(&s, "Bot * Bool")) {
        bad.push("Bot * Int equivalent to Bot * Bool".into());
    }
    for i in 0..LIFT_SAMPLES {
        let t = random_type(&s, &mut rng, 4);
        if !s.subtype(t, s.or(t, s.bot())) {
            bad.push(format!("lift #{i}"));
        }
    }
    let n = 1 + 2 * LAW_SAMPLES + 3 + LIFT_SAMPLES;
    outcome(
        bad.is_empty(),
        format!("{} of {n} judgments wrong {bad:?}", bad.len()),
    )
}

fn union_of_subsets() -> Outcome {
    let s = TypeStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for i in 0..SUBSET_FAMILIES {
        let n = 1 + i % 3;
        let family: Vec<TypeId> = (0..n).map(|_| random_type(&s, &mut rng, 3)).collect();
        let cells = (0..1u32 << n).map(|mask| {
            s.and_all((0..n).map(|j| {
                if mask & (1 << j) != 0 {
                    family[j]
                } else {
                    s.neg(family[j])
                }
            }))
        });
        if !s.equiv(s.or_all(cells), s.any()) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("{bad} of {SUBSET_FAMILIES} families fail"),
    )
}

/// Pairs that are not subtypes; each needs a witness of depth at most 3.
const NEGATIVE_SUITE: [(&str, &str); 25] = [
    ("Int", "Bool"),
    ("Int | Bool", "Int"),
    ("Bot", "Int"),
    ("Int | Bot", "Int"),
    ("Bot * Int", "Bot * Bool"),
    ("Int * Int", "Int * Bool"),
    ("Int * (Int | Bool)", "Int * Int"),
    ("(Int | Bool) * (Int | Bool)", "(Int * Int) | (Bool * Bool)"),
    ("Int -> Int", "Bool -> Bool"),
    ("(Int | Bool) -> Int", "(Int | Bool) -> Bool"),
    ("Int -> Int", "Int -> Bool"),
    ("Int -> Int", "(Int | Bool) -> Int"),
    ("Any", "Int | Bool | (Any * Any) | (Empty -> Any)"),
    ("~Int", "Bool"),
    ("Empty -> Any", "Int -> Int"),
    ("(Int -> Int) & (Bool -> Bool)", "(Int | Bool) -> Int"),
    ("Int -> Bot", "Int -> Int"),
    ("0 | 1", "1"),
    ("true", "false"),
    ("Bool", "true"),
    ("Int * Bot", "Int * Int"),
    ("~(Int * Int)", "~(Any * Any)"),
    ("(Int * Int) | Bot", "Int * Int"),
    ("Int -> (Int * Int)", "Int -> (Int * Bool)"),
    ("~Bot", "Int | Bool | (Any * Any)"),
];

fn oracle_cross_check() -> Outcome {
    let s = TypeStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let bounds = EnumBounds::default();
    let (mut violations, mut inconclusive, mut holds) = (0, 0, 0);
    for _ in 0..ORACLE_PAIRS {
        let a = random_type(&s, &mut rng, ORACLE_TYPE_DEPTH);
        let b = random_type(&s, &mut rng, ORACLE_TYPE_DEPTH);
        match cross_check(&s, a, b, &bounds) {
            Verdict::SoundnessViolation(_) => violations += 1,
            Verdict::Inconclusive => inconclusive += 1,
            Verdict::Consistent(None) => holds += 1,
            Verdict::Consistent(Some(_)) => {}
        }
    }
    let shallow = EnumBounds::new(WITNESS_DEPTH, lazyset::oracle::default_pool(), 2);
    let mut unwitnessed = Vec::new();
    for (a, b) in NEGATIVE_SUITE {
        let ok = matches!(
            cross_check(&s, ty(&s, a), ty(&s, b), &shallow),
            Verdict::Consistent(Some(d)) if d.depth() <= WITNESS_DEPTH
        );
        if !ok {
            unwitnessed.push(format!("{a} <= {b}"));
        }
    }
    outcome(
        violations == 0 && unwitnessed.is_empty(),
        format!(
            "{violations} violations in {ORACLE_PAIRS} pairs ({holds} subtypes, {inconclusive} unwitnessed non-subtypes); \
             {} of {} negatives unwitnessed {unwitnessed:?}",
            unwitnessed.len(),
            NEGATIVE_SUITE.len()
        ),
    )
}

fn disjoint_decompositions() -> Outcome {
    let s = TypeStore::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    for _ in 0..DISJOINT_SAMPLES {
        let arrows = random_arrows(&s, &mut rng, 3, 2);
        let before = s.and_all(arrows.iter().map(|&(a, b)| s.arrow(a, b)));
        let cells = interface_disjoint(&s, &arrows);
        let after = s.and_all(cells.iter().map(|&(a, b)| s.arrow(a, b)));
        let disjoint = pairwise(&cells, |x, y| s.is_empty(s.and(x.0, y.0)));
        if !s.equiv(before, after) || !disjoint {
            bad += 1;
        }

        let rects = random_arrows(&s, &mut rng, 3, 2);
        let before = s.or_all(rects.iter().map(|&(a, b)| s.prod(a, b)));
        let cells = make_fully_disjoint(&s, &rects);
        let after = s.or_all(cells.iter().map(|&(a, b)| s.prod(a, b)));
        let sides = pairwise(&cells, |x, y| {
            let l = s.equiv(x.0, y.0) || s.is_empty(s.and(x.0, y.0));
            let r = s.equiv(x.1, y.1) || s.is_empty(s.and(x.1, y.1));
            l && r
        });
        if !s.equiv(before, after) || !sides {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("{bad} of {} decompositions wrong", 2 * DISJOINT_SAMPLES),
    )
}

fn pairwise<T>(xs: &[T], f: impl Fn(&T, &T) -> bool) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, a)| xs[i + 1..].iter().all(|b| f(a, b)))
}

/// Checks every reduct of `program` against `t` with one checker and
/// returns (steps, preserved, strategies used).
fn replay(s: &TypeStore, program: &Expr, t: TypeId) -> (usize, usize, Vec<SplitStrategy>) {
    let mut checker = Checker::for_program(s, CheckOptions::default(), program);
    let env = TypeEnv::new();
    let mut preserved = checker.check_internal(&env, program, t).holds() as usize;
    let r = reduce_with(s, program, 1000, |_, _, _, e| {
        preserved += (checker.check_internal(&env, e, t) == CheckVerdict::Holds) as usize;
    });
    let used = checker.stats.strategies.keys().copied().collect();
    (r.steps, preserved, used)
}

fn example_programs() -> Outcome {
    let s = TypeStore::new();
    let mut notes = Vec::new();

    let neg = source(&s, &curated("neg.lzs"));
    let neg_ty = lazyset::check_program(&s, &neg, CheckOptions::default()).map(|r| r.ty);
    let neg_ok = neg_ty
        .as_ref()
        .is_ok_and(|&t| display_type(&s, t) == "(tt -> ff) & (ff -> tt)");
    notes.push(format!("neg interface {}", ok_word(neg_ok)));

    let neg_true = source(&s, &curated("neg_true.lzs"));
    let t = lazyset::check_program(&s, &neg_true, CheckOptions::default())
        .unwrap()
        .ty;
    let compiled = compile(&neg_true);
    let r = lazyset::reduce(&s, &compiled, 1000);
    let answer = lazyset::print_expr(&s, &r.expr);
    let (steps, preserved, _) = replay(&s, &compiled, t);
    let neg_run = r.outcome == lazyset::Outcome::Answer
        && answer.ends_with(" in false")
        && r.steps <= NEG_MAX_STEPS
        && preserved == steps + 1;
    notes.push(format!(
        "neg true: {} steps, {preserved}/{} preserved {}",
        r.steps,
        steps + 1,
        ok_word(neg_run)
    ));

    let dup = source(
        &s,
        "fun f (x : (Int -> Int * Int) & (Bool -> Bool * Bool)) = (x, x)",
    );
    let dup_ty = lazyset::check_program(&s, &dup, CheckOptions::default())
        .unwrap()
        .ty;
    let target = parse_type(
        &s,
        "(Int | Bool) -> ((Int * Int) | (Bool * Bool))",
        BuildMode::Interface,
    )
    .unwrap();
    let dup_sub = s.subtype(dup_ty, target);
    let dup_app = source(&s, &curated("dup.lzs"));
    let t = lazyset::check_program(&s, &dup_app, CheckOptions::default())
        .unwrap()
        .ty;
    let expected = parse_type(
        &s,
        "((Int | Bot) * (Int | Bot)) | ((Bool | Bot) * (Bool | Bot)) | Bot",
        BuildMode::Raw,
    )
    .unwrap();
    let (steps, preserved, used) = replay(&s, &compile(&dup_app), t);
    let split = used
        .iter()
        .any(|u| matches!(u, SplitStrategy::DnfLines | SplitStrategy::ProductCells));
    let dup_ok = dup_sub && s.subtype(t, expected) && preserved == steps + 1 && split;
    notes.push(format!(
        "dup subsumes {}, trace {preserved}/{} preserved with {used:?} {}",
        ok_word(dup_sub),
        steps + 1,
        ok_word(dup_ok)
    ));

    let open = parse_internal(
        &s,
        "case y = (3, x) in Int * Any ? 1 : 2",
        ParseOptions::default(),
    )
    .unwrap();
    let first_open = matches!(
        step(&s, &open),
        StepOutcome::Stepped {
            rule: Rule::Case1,
            ..
        }
    );
    let prog = compile(&source(&s, &curated("typecase.lzs")));
    let mut rules = Vec::new();
    reduce_with(&s, &prog, 100, |_, r, _, _| rules.push(r));
    let first_case = rules
        .iter()
        .find(|r| matches!(r, Rule::Case1 | Rule::Case2));
    let tc_ok = first_open && first_case == Some(&Rule::Case1);
    notes.push(format!("typecase fires Case1 {}", ok_word(tc_ok)));

    outcome(neg_ok && neg_run && dup_ok && tc_ok, notes.join("; "))
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "WRONG"
    }
}

fn soundness_fuzz() -> (Outcome, usize) {
    let mut corpus = Corpus::curated();
    corpus.extend(Corpus::generated(FUZZ_SEED, FUZZ_PROGRAMS, FUZZ_SIZE));
    let config = RunConfig {
        fuel: FUZZ_FUEL,
        ..RunConfig::default()
    };
    let r = harness::run_corpus(&corpus, &config);
    let t = &r.totals;
    let ill = r
        .programs
        .iter()
        .filter(|p| p.outcome == RunOutcome::IllTyped)
        .count();
    let ok = t.stuck == 0 && t.open == 0 && t.refuted == 0 && t.curated_exhausted == 0 && ill == 0;
    (
        outcome(
            ok,
            format!(
                "{} programs (seed {FUZZ_SEED}, size {FUZZ_SIZE}, fuel {FUZZ_FUEL}): stuck {}, refuted {}, \
                 exhausted {} (curated {}), answers {}, out of fuel {}",
                t.programs,
                t.stuck,
                t.refuted,
                t.exhausted,
                t.curated_exhausted,
                t.answers,
                t.out_of_fuel
            ),
        ),
        t.empty_types,
    )
}

fn never_empty(harness_empty: usize) -> Outcome {
    let s = TypeStore::new();
    let mut programs: Vec<String> = Corpus::curated()
        .programs
        .into_iter()
        .filter(|e| e.id.ends_with(".lzs"))
        .map(|e| e.source)
        .collect();
    programs.extend(
        (0..FUZZ_PROGRAMS as u64).map(|i| harness::generate_source(FUZZ_SEED + i, FUZZ_SIZE)),
    );
    let mut empty = 0;
    for p in &programs {
        let e = source(&s, p);
        let mut checker = Checker::for_program(&s, CheckOptions::default(), &e);
        let t = checker.check_source(&TypeEnv::new(), &e).unwrap().ty;
        empty += s.is_empty(t) as usize + checker.stats.empty_results;
    }
    outcome(
        empty == 0 && harness_empty == 0,
        format!(
            "{empty} empty types over {} checks, {harness_empty} during preservation",
            programs.len()
        ),
    )
}

fn sharing() -> Outcome {
    let s = TypeStore::new();
    let counts: Vec<usize> = (1..=4)
        .map(|n| {
            let e = compile(&source(&s, &harness::sharing_program(n)));
            let (r, count) = shared_bound_steps(&s, &e, "x", 1000);
            assert_eq!(r.outcome, lazyset::Outcome::Answer);
            count
        })
        .collect();
    let ok = counts[0] > 0 && counts.iter().all(|&c| c == counts[0]);
    outcome(
        ok,
        format!("bound-expression steps for 1..4 uses: {counts:?}"),
    )
}

#[test]
fn acceptance() {
    let (fuzz, harness_empty) = {
        let start = Instant::now();
        let (mut o, e) = soundness_fuzz();
        let took = start.elapsed();
        o.ok &= took <= FUZZ_LIMIT;
        o.detail = format!("{} [{:.2?} of {:.0?}]", o.detail, took, FUZZ_LIMIT);
        (o, e)
    };
    let results = [
        ("1 subtyping laws", timed(LAWS_LIMIT, subtyping_laws)),
        (
            "2 union of all subsets",
            timed(SUBSETS_LIMIT, union_of_subsets),
        ),
        (
            "3 oracle cross-check",
            timed(ORACLE_LIMIT, oracle_cross_check),
        ),
        (
            "4 disjoint decompositions",
            timed(DISJOINT_LIMIT, disjoint_decompositions),
        ),
        ("5 example programs", example_programs()),
        ("6 soundness fuzz", fuzz),
        ("7 never empty", never_empty(harness_empty)),
        ("8 sharing", sharing()),
    ];
    let mut failed = Vec::new();
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.ok {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
