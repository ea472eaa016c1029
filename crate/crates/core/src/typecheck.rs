//! Type synthesis for source programs and checking for internal programs.
//!
//! Synthesis computes a least type for each node: eliminations go through
//! [`apply_type`] and [`proj_type`], so subsumption is only needed at the
//! points where a type is compared against an expectation. The internal
//! system adds `let`, typed by splitting the bound type into a union, and
//! abstractions refined by negated arrows; both are searched with bounded
//! strategies.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::lang::{print_expr, Abstr, Case, Expr};
use crate::subtype::{
    apply_type, make_fully_disjoint, partition, product_decompose, proj_type, OpError,
};
use crate::types::{display_type, print_type, TypeEnv, TypeId, TypeNode, TypeStore};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("`{subject}` has type {ty}, which is not a function")]
    NotAFunction { subject: String, ty: String },
    #[error("argument `{subject}` of type {arg} is outside the domain {domain}")]
    DomainMismatch {
        subject: String,
        arg: String,
        domain: String,
    },
    #[error("`{subject}` has type {ty}, which is not a pair")]
    NotAPair { subject: String, ty: String },
    #[error("body of `{subject}` has type {found}, not allowed by the arrow {arrow}")]
    BranchTypeError {
        subject: String,
        arrow: String,
        found: String,
    },
    #[error("variable `{0}` is bound to an empty type")]
    EmptyEnvBinding(String),
}

/// How the type of a `let`-bound expression was decomposed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplitStrategy {
    /// The disjuncts of the type that a value inhabits.
    ValueDisjunct,
    /// Fully disjoint product cells of a pair's type.
    ProductCells,
    /// Cells of the type by atom kind and by the program's probe types.
    DnfLines,
    /// The type as a whole.
    NoSplit,
}

impl fmt::Display for SplitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitStrategy::ValueDisjunct => "value-disjunct",
            SplitStrategy::ProductCells => "product-cells",
            SplitStrategy::DnfLines => "dnf-lines",
            SplitStrategy::NoSplit => "no-split",
        })
    }
}

/// One step of a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: &'static str,
    pub subject: String,
    pub ty: TypeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthResult {
    pub ty: TypeId,
    pub trace: Vec<TraceEntry>,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Type typecases on `Any`/`Empty` with the specialized rules.
    pub allow_trivial_case: bool,
    /// Record a derivation trace.
    pub trace: bool,
}

/// Counters accumulated by a checker.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    /// Synthesized types that turned out empty. Must stay zero.
    pub empty_results: usize,
    /// Number of synthesized nodes.
    pub synthesized: usize,
    /// Strategy that first succeeded for each checked `let`.
    pub strategies: BTreeMap<SplitStrategy, usize>,
    /// Abstractions that needed a negated arrow.
    pub negations_used: usize,
}

/// Outcome of checking an internal expression against a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckVerdict {
    Holds,
    /// The first failing obligation, rendered as text.
    Fails(String),
}

impl CheckVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CheckVerdict::Holds)
    }
}

const MAX_CELLS: usize = 16;
const SUBJECT_WIDTH: usize = 48;

pub struct Checker<'s> {
    store: &'s TypeStore,
    opts: CheckOptions,
    probes: Vec<TypeId>,
    trace: Vec<TraceEntry>,
    pub stats: CheckStats,
}

/// Types a program's `let` splits are refined by: interface domains and
/// typecase tests, lifted and unlifted.
pub fn probes_of(e: &Expr) -> Vec<TypeId> {
    fn go(e: &Expr, out: &mut Vec<TypeId>) {
        match e {
            Expr::Var(_) | Expr::Const(_) => {}
            Expr::Abstr(a) => {
                for &(d, _) in &a.iface.arrows {
                    out.push(d);
                }
                go(&a.body, out);
            }
            Expr::App(a, b) | Expr::Pair(a, b) => {
                go(a, out);
                go(b, out);
            }
            Expr::Proj(_, a) => go(a, out),
            Expr::Case(c) => {
                out.push(c.test);
                go(&c.scrutinee, out);
                go(&c.then_e, out);
                go(&c.else_e, out);
            }
            Expr::Let(l) => {
                go(&l.bound, out);
                go(&l.body, out);
            }
        }
    }
    let mut out = Vec::new();
    go(e, &mut out);
    let mut seen = std::collections::HashSet::new();
    out.retain(|t| seen.insert(*t));
    out
}

fn subject(store: &TypeStore, e: &Expr) -> String {
    let s = print_expr(store, e);
    if s.chars().count() <= SUBJECT_WIDTH {
        s
    } else {
        let cut: String = s.chars().take(SUBJECT_WIDTH - 3).collect();
        format!("{cut}...")
    }
}

impl<'s> Checker<'s> {
    pub fn new(store: &'s TypeStore, opts: CheckOptions) -> Self {
        Checker {
            store,
            opts,
            probes: Vec::new(),
            trace: Vec::new(),
            stats: CheckStats::default(),
        }
    }

    /// A checker whose `let` splits are refined by the probes of `program`.
    pub fn for_program(store: &'s TypeStore, opts: CheckOptions, program: &Expr) -> Self {
        let mut c = Self::new(store, opts);
        c.probes = probes_of(program);
        c
    }

    pub fn store(&self) -> &'s TypeStore {
        self.store
    }

    pub fn take_trace(&mut self) -> Vec<TraceEntry> {
        std::mem::take(&mut self.trace)
    }

    fn wellformed(&self, env: &TypeEnv) -> Result<(), TypeError> {
        match env.iter().find(|&(_, t)| self.store.is_empty(t)) {
            Some((x, _)) => Err(TypeError::EmptyEnvBinding(x.to_string())),
            None => Ok(()),
        }
    }

    fn note(&mut self, rule: &'static str, e: &Expr, ty: TypeId) -> TypeId {
        self.stats.synthesized += 1;
        if self.store.is_empty(ty) {
            self.stats.empty_results += 1;
        }
        if self.opts.trace {
            self.trace.push(TraceEntry {
                rule,
                subject: subject(self.store, e),
                ty,
            });
        }
        ty
    }

    /// Least type of `e` under `env`.
    pub fn synth(&mut self, env: &TypeEnv, e: &Expr) -> Result<TypeId, TypeError> {
        let s = self.store;
        match e {
            Expr::Var(x) => {
                let t = env
                    .lookup(x)
                    .ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
                Ok(self.note("Var", e, t))
            }
            Expr::Const(c) => Ok(self.note("Const", e, s.constant(c))),
            Expr::Abstr(a) => {
                let t = self.check_abstr(env, e, a)?;
                Ok(self.note("Abstr", e, t))
            }
            Expr::App(f, arg) => {
                let tf = self.synth(env, f)?;
                if !s.subtype(tf, s.lift_bot(s.top_arrow())) {
                    return Err(TypeError::NotAFunction {
                        subject: subject(s, f),
                        ty: display_type(s, tf),
                    });
                }
                let ta = self.synth(env, arg)?;
                let r = apply_type(s, s.diff(tf, s.bot()), ta).map_err(|err| match err {
                    OpError::DomainMismatch => TypeError::DomainMismatch {
                        subject: subject(s, arg),
                        arg: display_type(s, ta),
                        domain: crate::subtype::domain_of(s, s.diff(tf, s.bot()))
                            .map(|d| display_type(s, d))
                            .unwrap_or_default(),
                    },
                    _ => TypeError::NotAFunction {
                        subject: subject(s, f),
                        ty: display_type(s, tf),
                    },
                })?;
                Ok(self.note("Appl", e, s.lift_bot(r)))
            }
            Expr::Pair(a, b) => {
                let ta = self.synth(env, a)?;
                let tb = self.synth(env, b)?;
                Ok(self.note("Pair", e, s.prod(ta, tb)))
            }
            Expr::Proj(i, a) => {
                let t = self.synth(env, a)?;
                if !s.subtype(t, s.lift_bot(s.top_prod())) {
                    return Err(TypeError::NotAPair {
                        subject: subject(s, a),
                        ty: display_type(s, t),
                    });
                }
                let r = proj_type(s, *i, t).map_err(|_| TypeError::NotAPair {
                    subject: subject(s, a),
                    ty: display_type(s, t),
                })?;
                Ok(self.note("Proj", e, s.lift_bot(r)))
            }
            Expr::Case(c) => {
                let t0 = self.synth(env, &c.scrutinee)?;
                let mut branches = Vec::new();
                for (x_ty, branch) in self.live_branches(t0, c) {
                    branches.push(self.synth(&env.extend(&c.x, x_ty), branch)?);
                }
                Ok(self.note("Case", e, s.lift_bot(s.or_all(branches))))
            }
            Expr::Let(l) => {
                let t1 = self.synth(env, &l.bound)?;
                let (_, parts) = self.split_strategy(env, &l.bound, t1, &l.x, &l.body);
                let mut out = Vec::new();
                for ti in parts {
                    out.push(self.synth(&env.extend(&l.x, ti), &l.body)?);
                }
                Ok(self.note("Let", e, s.or_all(out)))
            }
        }
    }

    /// The branches of a typecase that must be typed, with the type of the
    /// bound variable in each.
    fn live_branches<'c>(&self, t0: TypeId, c: &'c Case) -> Vec<(TypeId, &'c Expr)> {
        let s = self.store;
        if self.opts.allow_trivial_case {
            if s.subtype(s.any(), c.test) {
                return vec![(t0, &c.then_e)];
            }
            if s.is_empty(c.test) {
                return vec![(t0, &c.else_e)];
            }
        }
        let t = s.diff(t0, s.bot());
        let mut out = Vec::new();
        if !s.subtype(t, s.neg(c.test)) {
            out.push((s.and(t, c.test), &c.then_e));
        }
        if !s.subtype(t, c.test) {
            out.push((s.diff(t, c.test), &c.else_e));
        }
        debug_assert!(!out.is_empty() || s.is_empty(t));
        out
    }

    /// Checks the body of an abstraction against every arrow of its
    /// interface and returns the interface.
    pub fn check_abstr(&mut self, env: &TypeEnv, e: &Expr, a: &Abstr) -> Result<TypeId, TypeError> {
        let s = self.store;
        let pi = a.iface.ty;
        let inner = env.extend(&a.f, pi);
        for &(dom, cod) in &a.iface.arrows {
            let env_i = inner.extend(&a.x, s.lift_bot(dom));
            let expected = s.lift_bot(cod);
            if let CheckVerdict::Fails(_) = self.check_in(&env_i, &a.body, expected)? {
                let found = self.synth(&env_i, &a.body)?;
                return Err(TypeError::BranchTypeError {
                    subject: subject(s, e),
                    arrow: display_type(s, s.lifted_arrow(dom, cod)),
                    found: display_type(s, found),
                });
            }
        }
        Ok(pi)
    }

    /// Decomposes the type `t1` of the bound expression of a `let`.
    pub fn split_strategy(
        &mut self,
        env: &TypeEnv,
        bound: &Expr,
        t1: TypeId,
        x: &str,
        body: &Expr,
    ) -> (SplitStrategy, Vec<TypeId>) {
        let s = self.store;
        if bound.is_value() {
            let lines: Vec<TypeId> = s.dnf(t1).lines.iter().map(|l| s.line_type(l)).collect();
            for d in lines {
                if let Ok(CheckVerdict::Holds) = self.check_in(env, bound, d) {
                    return (SplitStrategy::ValueDisjunct, vec![d]);
                }
            }
            return (SplitStrategy::ValueDisjunct, vec![t1]);
        }
        if !needs_split(x, body) {
            return (SplitStrategy::NoSplit, vec![t1]);
        }
        if let Expr::Pair(..) = bound {
            let p = s.diff(t1, s.bot());
            if let Ok(rects) = product_decompose(s, p) {
                let mut cells = Vec::new();
                for (a, b) in make_fully_disjoint(s, &rects) {
                    cells.extend(
                        partition(s, &self.probes, s.prod(a, b))
                            .into_iter()
                            .map(|(c, _)| c),
                    );
                }
                if s.subtype(s.bot(), t1) {
                    cells.push(s.bot());
                }
                if !cells.is_empty() && cells.len() <= MAX_CELLS {
                    return (SplitStrategy::ProductCells, cells);
                }
            }
            return (SplitStrategy::NoSplit, vec![t1]);
        }
        let mut probes: Vec<TypeId> =
            vec![s.bot(), s.int(), s.boolean(), s.top_prod(), s.top_arrow()];
        probes.extend(self.probes.iter().copied());
        let cells: Vec<TypeId> = partition(s, &probes, t1)
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        if cells.len() > 1 && cells.len() <= MAX_CELLS {
            (SplitStrategy::DnfLines, cells)
        } else {
            (SplitStrategy::NoSplit, vec![t1])
        }
    }

    /// Checks `e` against `expected`. Type errors inside `e` are failures.
    pub fn check_internal(&mut self, env: &TypeEnv, e: &Expr, expected: TypeId) -> CheckVerdict {
        if let Err(err) = self.wellformed(env) {
            return CheckVerdict::Fails(err.to_string());
        }
        match self.check_in(env, e, expected) {
            Ok(v) => v,
            Err(err) => CheckVerdict::Fails(err.to_string()),
        }
    }

    fn fails(&self, e: &Expr, found: TypeId, expected: TypeId) -> CheckVerdict {
        let s = self.store;
        CheckVerdict::Fails(format!(
            "`{}` has type {}, expected {}",
            subject(s, e),
            print_type(s, found),
            print_type(s, expected)
        ))
    }

    fn check_in(
        &mut self,
        env: &TypeEnv,
        e: &Expr,
        expected: TypeId,
    ) -> Result<CheckVerdict, TypeError> {
        let s = self.store;
        if s.is_empty(expected) {
            return Ok(CheckVerdict::Fails(format!(
                "`{}` cannot have an empty type",
                subject(s, e)
            )));
        }
        match e {
            Expr::Let(l) => {
                let t1 = self.synth(env, &l.bound)?;
                let mut candidates = vec![(SplitStrategy::NoSplit, vec![t1])];
                let split = self.split_strategy(env, &l.bound, t1, &l.x, &l.body);
                if split.1 != candidates[0].1 {
                    candidates.push(split);
                }
                let mut last = None;
                for (strategy, parts) in candidates {
                    let mut verdict = CheckVerdict::Holds;
                    for ti in parts {
                        verdict = self.check_in(&env.extend(&l.x, ti), &l.body, expected)?;
                        if !verdict.holds() {
                            break;
                        }
                    }
                    if verdict.holds() {
                        *self.stats.strategies.entry(strategy).or_default() += 1;
                        return Ok(verdict);
                    }
                    last = Some(verdict);
                }
                Ok(last.unwrap_or(CheckVerdict::Holds))
            }
            Expr::Case(c) => {
                if !s.subtype(s.bot(), expected) {
                    let t = self.synth(env, e)?;
                    return Ok(self.fails(e, t, expected));
                }
                let t0 = self.synth(env, &c.scrutinee)?;
                for (x_ty, branch) in self.live_branches(t0, c) {
                    let v = self.check_in(&env.extend(&c.x, x_ty), branch, expected)?;
                    if !v.holds() {
                        return Ok(v);
                    }
                }
                Ok(CheckVerdict::Holds)
            }
            Expr::Abstr(a) => {
                let pi = self.check_abstr(env, e, a)?;
                if s.subtype(pi, expected) {
                    return Ok(CheckVerdict::Holds);
                }
                for n in arrow_atoms(s, expected) {
                    let refined = s.diff(pi, n);
                    if !s.is_empty(refined) && s.subtype(refined, expected) {
                        self.stats.negations_used += 1;
                        return Ok(CheckVerdict::Holds);
                    }
                }
                Ok(self.fails(e, pi, expected))
            }
            _ => {
                let t = self.synth(env, e)?;
                if s.subtype(t, expected) {
                    Ok(CheckVerdict::Holds)
                } else {
                    Ok(self.fails(e, t, expected))
                }
            }
        }
    }

    /// Synthesizes the type of a source program.
    pub fn check_source(&mut self, env: &TypeEnv, e: &Expr) -> Result<SynthResult, TypeError> {
        self.wellformed(env)?;
        self.trace.clear();
        let ty = self.synth(env, e)?;
        Ok(SynthResult {
            ty,
            trace: self.take_trace(),
        })
    }
}

/// Whether splitting the type of `x` can make `body` more precise: `x`
/// occurs more than once or is examined by a typecase.
fn needs_split(x: &str, body: &Expr) -> bool {
    let mut count = 0;
    let mut scrutinized = false;
    count_uses(x, body, &mut count, &mut scrutinized);
    count > 1 || scrutinized
}

fn count_uses(x: &str, e: &Expr, count: &mut usize, scrutinized: &mut bool) {
    match e {
        Expr::Var(y) => {
            if y == x {
                *count += 1;
            }
        }
        Expr::Const(_) => {}
        Expr::Abstr(a) => {
            if a.f != x && a.x != x {
                count_uses(x, &a.body, count, scrutinized);
            }
        }
        Expr::App(a, b) | Expr::Pair(a, b) => {
            count_uses(x, a, count, scrutinized);
            count_uses(x, b, count, scrutinized);
        }
        Expr::Proj(_, a) => count_uses(x, a, count, scrutinized),
        Expr::Case(c) => {
            let before = *count;
            count_uses(x, &c.scrutinee, count, scrutinized);
            if *count > before {
                *scrutinized = true;
            }
            if c.x != x {
                count_uses(x, &c.then_e, count, scrutinized);
                count_uses(x, &c.else_e, count, scrutinized);
            }
        }
        Expr::Let(l) => {
            let before = *count;
            count_uses(x, &l.bound, count, scrutinized);
            // A let-bound alias may itself be examined.
            if *count > before && crate::lang::occurs_free(&l.x, &l.body) {
                *count += 1;
            }
            if l.x != x {
                count_uses(x, &l.body, count, scrutinized);
            }
        }
    }
}

/// Arrow atoms occurring anywhere in the normal form of `t`.
fn arrow_atoms(store: &TypeStore, t: TypeId) -> Vec<TypeId> {
    let mut out = Vec::new();
    for l in store.dnf(t).lines {
        for a in l.pos.into_iter().chain(l.neg) {
            if matches!(store.node(a), TypeNode::Arrow(..)) && !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// Synthesizes the type of a closed source program.
pub fn check_program(
    store: &TypeStore,
    e: &Expr,
    opts: CheckOptions,
) -> Result<SynthResult, TypeError> {
    Checker::for_program(store, opts, e).check_source(&TypeEnv::new(), e)
}

/// Checks a closed internal program against `expected`.
pub fn check_internal(
    store: &TypeStore,
    e: &Expr,
    expected: TypeId,
    opts: CheckOptions,
) -> CheckVerdict {
    Checker::for_program(store, opts, e).check_internal(&TypeEnv::new(), e, expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{compile, parse_internal, parse_source, ParseOptions};
    use crate::types::{parse_type, BuildMode};

    fn src(s: &TypeStore, text: &str) -> Expr {
        parse_source(s, text, ParseOptions::default()).unwrap()
    }

    fn synth(s: &TypeStore, text: &str) -> Result<TypeId, TypeError> {
        check_program(s, &src(s, text), CheckOptions::default()).map(|r| r.ty)
    }

    fn iface(s: &TypeStore, text: &str) -> TypeId {
        parse_type(s, text, BuildMode::Interface).unwrap()
    }

    const NEG: &str = "fun f (x : (tt -> ff) & (ff -> tt)) = case y = x in tt ? false : true";
    const DUP: &str = "fun f (x : (Int -> Int * Int) & (Bool -> Bool * Bool)) = (x, x)";

    #[test]
    fn negation_has_its_interface() {
        let s = TypeStore::new();
        let t = synth(&s, NEG).unwrap();
        assert_eq!(display_type(&s, t), "(tt -> ff) & (ff -> tt)");
        let r = synth(&s, &format!("({NEG}) true")).unwrap();
        assert!(s.equiv(r, s.lift_bot(s.bool_lit(false))));
    }

    #[test]
    fn abstraction_rules() {
        let s = TypeStore::new();
        assert!(synth(&s, "fun f (x : Int -> Int) = x").is_ok());
        assert!(synth(&s, "fun f (x : Int -> Int) = f x").is_ok());
        assert!(matches!(
            synth(&s, "fun f (x : Int -> Bool) = x"),
            Err(TypeError::BranchTypeError { .. })
        ));
        assert!(matches!(
            synth(&s, "(fun f (x : Int -> Int) = x) true"),
            Err(TypeError::DomainMismatch { .. })
        ));
        assert!(matches!(
            synth(&s, "3 4"),
            Err(TypeError::NotAFunction { .. })
        ));
        assert!(matches!(
            synth(&s, "fst 3"),
            Err(TypeError::NotAPair { .. })
        ));
        assert!(matches!(synth(&s, "y"), Err(TypeError::UnboundVariable(_))));
    }

    #[test]
    fn duplicating_function_subsumes_to_the_union_arrow() {
        let s = TypeStore::new();
        let t = synth(&s, DUP).unwrap();
        assert!(s.subtype(
            t,
            iface(&s, "(Int | Bool) -> ((Int * Int) | (Bool * Bool))")
        ));
        let arg = "((fun g (z : Int -> Int | Bool) = z) 5)";
        let app = src(&s, &format!("({DUP}) {arg}"));
        let r = check_program(&s, &app, CheckOptions::default()).unwrap().ty;
        let expect = parse_type(
            &s,
            "((Int | Bot) * (Int | Bot)) | ((Bool | Bot) * (Bool | Bot)) | Bot",
            BuildMode::Raw,
        );
        assert!(s.equiv(r, expect.unwrap()));
        // The reduct binds the argument once and needs the union split.
        let reduct = parse_internal(
            &s,
            &format!("let f = {DUP} in let x = {arg} in (x, x)"),
            ParseOptions::default(),
        )
        .unwrap();
        let mut c = Checker::for_program(&s, CheckOptions::default(), &reduct);
        assert!(c.check_internal(&TypeEnv::new(), &reduct, r).holds());
        assert_eq!(c.stats.strategies.get(&SplitStrategy::DnfLines), Some(&1));
    }

    #[test]
    fn typecase_branches() {
        let s = TypeStore::new();
        let t = synth(&s, "case y = true in tt ? 1 : false").unwrap();
        assert!(s.equiv(t, s.lift_bot(s.int_lit(1))));
        let g = "(fun g (z : Int -> Int | Bool) = z) 5";
        let t = synth(&s, &format!("case y = {g} in Int ? (y, y) : y")).unwrap();
        let expect = parse_type(&s, "(Int * Int) | Bool | Bot", BuildMode::Raw).unwrap();
        assert!(s.equiv(t, expect));
    }

    #[test]
    fn compilation_preserves_types() {
        let s = TypeStore::new();
        for text in [
            NEG,
            DUP,
            "case y = (fun g (z : Int -> Int | Bool) = z) 5 in Int ? (y, y) : y",
        ] {
            let e = src(&s, text);
            let t = check_program(&s, &e, CheckOptions::default()).unwrap().ty;
            assert!(
                check_internal(&s, &compile(&e), t, CheckOptions::default()).holds(),
                "{text}"
            );
        }
    }

    #[test]
    fn empty_expectation_never_holds() {
        let s = TypeStore::new();
        assert!(!check_internal(&s, &Expr::int(1), s.empty(), CheckOptions::default()).holds());
    }

    #[test]
    fn negated_arrow_refinement() {
        let s = TypeStore::new();
        let e = src(&s, "fun f (x : Int -> Int) = x");
        let expected = s.diff(iface(&s, "Int -> Int"), s.arrow(s.boolean(), s.boolean()));
        let mut c = Checker::new(&s, CheckOptions::default());
        assert!(c.check_internal(&TypeEnv::new(), &e, expected).holds());
        assert_eq!(c.stats.negations_used, 1);
    }
}
