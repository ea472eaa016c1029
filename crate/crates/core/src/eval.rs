//! Deterministic small-step call-by-need reduction of internal programs.
//!
//! A term is decomposed into an evaluation context and a focus. Inside a
//! typecase a decidable test fires before anything else; otherwise the
//! leftmost variable of the scrutinee is demanded. The bound expression of
//! a `let` is reduced only when its body demands the variable.

use std::fmt;

use crate::lang::{free_vars, rename, substitute, typeof_check, Expr, Fresh, Let};
use crate::types::{TypeId, TypeStore};

pub const DEFAULT_FUEL: usize = 100_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Appl,
    ApplL,
    Proj,
    ProjL,
    LetV,
    LetP,
    LetL,
    Case1,
    Case2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One layer of an evaluation context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `E e`
    AppLeft,
    /// `π_i E`
    Proj,
    /// `let x = e in E`
    LetBody(String),
    /// `let x = E in E'⌊x⌋`
    LetBound(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StuckReason {
    NotAFunction(String),
    NotAPair(String),
    /// A typecase whose scrutinee has no variable and whose test is undecided.
    UndecidedCase(String),
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StuckReason::NotAFunction(s) => write!(f, "applying a non-function: {s}"),
            StuckReason::NotAPair(s) => write!(f, "projecting a non-pair: {s}"),
            StuckReason::UndecidedCase(s) => write!(f, "undecidable typecase: {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Focus {
    Answer,
    /// The term is `E⌊x⌋` with `x` free.
    Demand(String),
    Redex(Rule),
    Stuck(StuckReason),
}

/// A term split into context frames (outermost first) and what sits in the hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub frames: Vec<Frame>,
    pub focus: Focus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CaseDecision {
    Then,
    Else,
    Undecided,
}

/// Which typecase rule applies to a check form.
pub fn case_decision(store: &TypeStore, chi: &Expr, test: TypeId) -> CaseDecision {
    let Some(t) = typeof_check(store, chi) else {
        return CaseDecision::Undecided;
    };
    if store.subtype(t, test) {
        CaseDecision::Then
    } else if store.subtype(t, store.neg(test)) {
        CaseDecision::Else
    } else {
        CaseDecision::Undecided
    }
}

fn leftmost_var(chi: &Expr) -> Option<&str> {
    match chi {
        Expr::Var(x) => Some(x),
        Expr::Pair(a, b) => leftmost_var(a).or_else(|| leftmost_var(b)),
        _ => None,
    }
}

fn short(store: &TypeStore, e: &Expr) -> String {
    let s = crate::lang::print_expr(store, e);
    if s.len() > 60 {
        format!("{}...", s.chars().take(57).collect::<String>())
    } else {
        s
    }
}

pub fn decompose(store: &TypeStore, e: &Expr) -> Decomposition {
    let mut frames = Vec::new();
    let focus = dec(store, e, &mut frames);
    if !matches!(focus, Focus::Redex(_) | Focus::Stuck(_)) {
        frames.clear();
    }
    Decomposition { frames, focus }
}

fn dec(store: &TypeStore, e: &Expr, frames: &mut Vec<Frame>) -> Focus {
    match e {
        Expr::Const(_) | Expr::Abstr(_) | Expr::Pair(..) => Focus::Answer,
        Expr::Var(x) => Focus::Demand(x.clone()),
        Expr::App(f, _) => match &**f {
            Expr::Abstr(_) => Focus::Redex(Rule::Appl),
            Expr::Let(_) if f.is_answer() => Focus::Redex(Rule::ApplL),
            Expr::Const(_) | Expr::Pair(..) => {
                Focus::Stuck(StuckReason::NotAFunction(short(store, f)))
            }
            _ => {
                frames.push(Frame::AppLeft);
                dec(store, f, frames)
            }
        },
        Expr::Proj(_, a) => match &**a {
            Expr::Pair(..) => Focus::Redex(Rule::Proj),
            Expr::Let(_) if a.is_answer() => Focus::Redex(Rule::ProjL),
            Expr::Const(_) | Expr::Abstr(_) => Focus::Stuck(StuckReason::NotAPair(short(store, a))),
            _ => {
                frames.push(Frame::Proj);
                dec(store, a, frames)
            }
        },
        Expr::Case(c) => match case_decision(store, &c.scrutinee, c.test) {
            CaseDecision::Then => Focus::Redex(Rule::Case1),
            CaseDecision::Else => Focus::Redex(Rule::Case2),
            CaseDecision::Undecided => match leftmost_var(&c.scrutinee) {
                Some(x) => Focus::Demand(x.to_string()),
                None => Focus::Stuck(StuckReason::UndecidedCase(short(store, e))),
            },
        },
        Expr::Let(l) => {
            let depth = frames.len();
            frames.push(Frame::LetBody(l.x.clone()));
            match dec(store, &l.body, frames) {
                Focus::Demand(y) if y == l.x => {
                    frames.truncate(depth);
                    match &l.bound {
                        Expr::Const(_) | Expr::Abstr(_) => Focus::Redex(Rule::LetV),
                        Expr::Pair(..) => Focus::Redex(Rule::LetP),
                        b if b.is_answer() => Focus::Redex(Rule::LetL),
                        b => {
                            frames.push(Frame::LetBound(l.x.clone()));
                            dec(store, b, frames)
                        }
                    }
                }
                other => other,
            }
        }
    }
}

/// Applies `f` to the subterm reached through `frames`.
fn map_at(e: &Expr, frames: &[Frame], f: &mut dyn FnMut(&Expr) -> Expr) -> Expr {
    let Some((frame, rest)) = frames.split_first() else {
        return f(e);
    };
    match (frame, e) {
        (Frame::AppLeft, Expr::App(a, b)) => Expr::app(map_at(a, rest, f), (**b).clone()),
        (Frame::Proj, Expr::Proj(i, a)) => Expr::proj(*i, map_at(a, rest, f)),
        (Frame::LetBody(_), Expr::Let(l)) => {
            Expr::let_in(&l.x, l.bound.clone(), map_at(&l.body, rest, f))
        }
        (Frame::LetBound(_), Expr::Let(l)) => {
            Expr::let_in(&l.x, map_at(&l.bound, rest, f), l.body.clone())
        }
        _ => unreachable!("frame {frame:?} does not match the term"),
    }
}

/// The subterm reached through `frames`.
pub fn focus_at<'e>(e: &'e Expr, frames: &[Frame]) -> &'e Expr {
    let mut cur = e;
    for frame in frames {
        cur = match (frame, cur) {
            (Frame::AppLeft, Expr::App(a, _)) => a,
            (Frame::Proj, Expr::Proj(_, a)) => a,
            (Frame::LetBody(_), Expr::Let(l)) => &l.body,
            (Frame::LetBound(_), Expr::Let(l)) => &l.bound,
            _ => unreachable!("frame {frame:?} does not match the term"),
        };
    }
    cur
}

/// Rewrites a redex by `rule`.
fn contract(rule: Rule, e: &Expr, fresh: &mut Fresh) -> Expr {
    match (rule, e) {
        (Rule::Appl, Expr::App(f, arg)) => {
            let Expr::Abstr(a) = &**f else { unreachable!() };
            let mut fname = a.f.clone();
            let mut body = a.body.clone();
            if a.f != a.x && free_vars(arg).contains(&a.f) {
                fname = fresh.name();
                body = rename(&body, &a.f, &fname);
            }
            Expr::let_in(
                fname,
                (**f).clone(),
                Expr::let_in(&a.x, (**arg).clone(), body),
            )
        }
        (Rule::ApplL, Expr::App(f, arg)) => {
            let Expr::Let(l) = &**f else { unreachable!() };
            let (x, a) = avoid(l, &free_vars(arg), fresh);
            Expr::let_in(x, l.bound.clone(), Expr::app(a, (**arg).clone()))
        }
        (Rule::Proj, Expr::Proj(i, p)) => {
            let Expr::Pair(a, b) = &**p else {
                unreachable!()
            };
            if *i == 1 {
                (**a).clone()
            } else {
                (**b).clone()
            }
        }
        (Rule::ProjL, Expr::Proj(i, p)) => {
            let Expr::Let(l) = &**p else { unreachable!() };
            Expr::let_in(&l.x, l.bound.clone(), Expr::proj(*i, l.body.clone()))
        }
        (Rule::LetV, Expr::Let(l)) => substitute(&l.body, &l.x, &l.bound, fresh),
        (Rule::LetP, Expr::Let(l)) => {
            let Expr::Pair(a, b) = &l.bound else {
                unreachable!()
            };
            let x1 = fresh.name();
            let x2 = fresh.name();
            let body = substitute(
                &l.body,
                &l.x,
                &Expr::pair(Expr::var(&x1), Expr::var(&x2)),
                fresh,
            );
            Expr::let_in(x1, (**a).clone(), Expr::let_in(x2, (**b).clone(), body))
        }
        (Rule::LetL, Expr::Let(l)) => {
            let Expr::Let(inner) = &l.bound else {
                unreachable!()
            };
            let mut fv = free_vars(&l.body);
            fv.remove(&l.x);
            let (y, a) = avoid(inner, &fv, fresh);
            Expr::let_in(
                y,
                inner.bound.clone(),
                Expr::let_in(&l.x, a, l.body.clone()),
            )
        }
        (Rule::Case1 | Rule::Case2, Expr::Case(c)) => {
            let branch = if rule == Rule::Case1 {
                &c.then_e
            } else {
                &c.else_e
            };
            Expr::let_in(&c.x, c.scrutinee.clone(), branch.clone())
        }
        _ => unreachable!("{rule} does not apply"),
    }
}

/// The binder and body of `l`, with the binder renamed when it would
/// capture one of `fv` once the body is moved under it.
fn avoid(l: &Let, fv: &std::collections::BTreeSet<String>, fresh: &mut Fresh) -> (String, Expr) {
    if fv.contains(&l.x) {
        let y = fresh.name();
        let body = rename(&l.body, &l.x, &y);
        (y, body)
    } else {
        (l.x.clone(), l.body.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped {
        expr: Expr,
        rule: Rule,
        frames: Vec<Frame>,
    },
    IsAnswer,
    Stuck(StuckReason),
    NeedsVariable(String),
}

pub fn step(store: &TypeStore, e: &Expr) -> StepOutcome {
    let d = decompose(store, e);
    match d.focus {
        Focus::Answer => StepOutcome::IsAnswer,
        Focus::Demand(x) => StepOutcome::NeedsVariable(x),
        Focus::Stuck(r) => StepOutcome::Stuck(r),
        Focus::Redex(rule) => {
            let mut fresh = Fresh::for_expr(e);
            let expr = map_at(e, &d.frames, &mut |sub| contract(rule, sub, &mut fresh));
            StepOutcome::Stepped {
                expr,
                rule,
                frames: d.frames,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Answer,
    OutOfFuel,
    Stuck(StuckReason),
    /// The program demands a free variable.
    Open(String),
}

impl Outcome {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Answer => 0,
            Outcome::OutOfFuel => 3,
            Outcome::Stuck(_) => 4,
            Outcome::Open(_) => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub outcome: Outcome,
    /// The last term reached.
    pub expr: Expr,
    pub steps: usize,
    pub rules: Vec<Rule>,
}

/// Steps `e` until it stops or `fuel` steps have been taken, calling
/// `on_step` after each step with its index, rule, frames and reduct.
pub fn reduce_with(
    store: &TypeStore,
    e: &Expr,
    fuel: usize,
    mut on_step: impl FnMut(usize, Rule, &[Frame], &Expr),
) -> Reduction {
    let mut cur = e.clone();
    let mut rules = Vec::new();
    loop {
        if rules.len() >= fuel {
            if let StepOutcome::Stepped { .. } = step(store, &cur) {
                return Reduction {
                    outcome: Outcome::OutOfFuel,
                    expr: cur,
                    steps: rules.len(),
                    rules,
                };
            }
        }
        match step(store, &cur) {
            StepOutcome::Stepped { expr, rule, frames } => {
                rules.push(rule);
                on_step(rules.len(), rule, &frames, &expr);
                cur = expr;
            }
            StepOutcome::IsAnswer => {
                return Reduction {
                    outcome: Outcome::Answer,
                    expr: cur,
                    steps: rules.len(),
                    rules,
                }
            }
            StepOutcome::Stuck(r) => {
                return Reduction {
                    outcome: Outcome::Stuck(r),
                    expr: cur,
                    steps: rules.len(),
                    rules,
                }
            }
            StepOutcome::NeedsVariable(x) => {
                return Reduction {
                    outcome: Outcome::Open(x),
                    expr: cur,
                    steps: rules.len(),
                    rules,
                }
            }
        }
    }
}

pub fn reduce(store: &TypeStore, e: &Expr, fuel: usize) -> Reduction {
    reduce_with(store, e, fuel, |_, _, _, _| {})
}

/// Reduction steps taken inside the bound expression of `let x = M in …`,
/// following `M`'s own bindings when they are floated out by `LetL`.
pub fn shared_bound_steps(store: &TypeStore, e: &Expr, x: &str, fuel: usize) -> (Reduction, usize) {
    let mut tracked = vec![x.to_string()];
    let mut count = 0;
    let mut cur = e.clone();
    let mut rules = Vec::new();
    let outcome = loop {
        if rules.len() >= fuel {
            break Outcome::OutOfFuel;
        }
        match step(store, &cur) {
            StepOutcome::Stepped { expr, rule, frames } => {
                let inside = frames
                    .iter()
                    .any(|f| matches!(f, Frame::LetBound(y) if tracked.contains(y)));
                if inside {
                    count += 1;
                }
                if rule == Rule::LetL {
                    if let Expr::Let(l) = focus_at(&cur, &frames) {
                        if tracked.contains(&l.x) {
                            if let Expr::Let(inner) = focus_at(&expr, &frames) {
                                tracked.push(inner.x.clone());
                            }
                        }
                    }
                }
                rules.push(rule);
                cur = expr;
            }
            StepOutcome::IsAnswer => break Outcome::Answer,
            StepOutcome::Stuck(r) => break Outcome::Stuck(r),
            StepOutcome::NeedsVariable(y) => break Outcome::Open(y),
        }
    };
    (
        Reduction {
            outcome,
            expr: cur,
            steps: rules.len(),
            rules,
        },
        count,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{compile, parse_internal, parse_source, print_expr, ParseOptions};

    fn run(s: &TypeStore, src: &str, fuel: usize) -> Reduction {
        let e = compile(&parse_source(s, src, ParseOptions::default()).unwrap());
        reduce(s, &e, fuel)
    }

    fn internal(s: &TypeStore, src: &str) -> Expr {
        parse_internal(s, src, ParseOptions::default()).unwrap()
    }

    #[test]
    fn identity_application_in_three_steps() {
        let s = TypeStore::new();
        let r = run(&s, "(fun f (x : Int -> Int) = x) 3", 100);
        assert_eq!(r.outcome, Outcome::Answer);
        assert_eq!(r.rules, vec![Rule::Appl, Rule::LetV]);
        assert_eq!(
            print_expr(&s, &r.expr),
            "let f = fun f (x : Int -> Int) = x in 3"
        );
    }

    #[test]
    fn negation_of_true() {
        let s = TypeStore::new();
        let r = run(
            &s,
            "(fun f (x : (tt -> ff) & (ff -> tt)) = case y = x in tt ? false : true) true",
            100,
        );
        assert_eq!(r.outcome, Outcome::Answer);
        assert!(r.steps <= 25);
        assert!(
            print_expr(&s, &r.expr).ends_with("in false"),
            "{}",
            print_expr(&s, &r.expr)
        );
    }

    #[test]
    fn projection_through_let() {
        let s = TypeStore::new();
        let e = internal(&s, "fst (let y = g 0 in (1, 2))");
        let StepOutcome::Stepped { expr, rule, .. } = step(&s, &e) else {
            panic!()
        };
        assert_eq!(rule, Rule::ProjL);
        assert_eq!(print_expr(&s, &expr), "let y = g 0 in fst (1, 2)");
        let StepOutcome::Stepped { expr, rule, .. } = step(&s, &expr) else {
            panic!()
        };
        assert_eq!(rule, Rule::Proj);
        assert_eq!(print_expr(&s, &expr), "let y = g 0 in 1");
    }

    #[test]
    fn decidable_typecase_fires_first() {
        let s = TypeStore::new();
        let e = internal(&s, "let x = g 0 in case y = (3, x) in Int * Any ? 1 : 2");
        let StepOutcome::Stepped { expr, rule, .. } = step(&s, &e) else {
            panic!()
        };
        assert_eq!(rule, Rule::Case1);
        assert_eq!(print_expr(&s, &expr), "let x = g 0 in let y = (3, x) in 1");
        let e = internal(&s, "case y = (3, z) in Bool * Any ? 1 : 2");
        assert!(matches!(
            step(&s, &e),
            StepOutcome::Stepped {
                rule: Rule::Case2,
                ..
            }
        ));
        let e = internal(&s, "case y = (z, 3) in Int * Any ? 1 : 2");
        assert_eq!(step(&s, &e), StepOutcome::NeedsVariable("z".into()));
    }

    #[test]
    fn demand_reaches_the_bound_expression() {
        let s = TypeStore::new();
        let d = decompose(&s, &internal(&s, "let x = fst (1, 2) in x"));
        assert_eq!(d.frames, vec![Frame::LetBound("x".into())]);
        assert_eq!(d.focus, Focus::Redex(Rule::Proj));
        let d = decompose(&s, &internal(&s, "let x = fst (1, 2) in y"));
        assert_eq!(d.focus, Focus::Demand("y".into()));
    }

    #[test]
    fn pairs_go_through_letp() {
        let s = TypeStore::new();
        let e = internal(&s, "let x = (3, true) in (snd x, fst x)");
        assert_eq!(step(&s, &e), StepOutcome::IsAnswer);
        let e = internal(&s, "let x = (3, true) in fst x");
        let r = reduce(&s, &e, 100);
        assert_eq!(r.rules, vec![Rule::LetP, Rule::Proj, Rule::LetV]);
        assert_eq!(print_expr(&s, &r.expr), "let %1 = true in 3");
    }

    #[test]
    fn loops_run_out_of_fuel_and_bad_terms_get_stuck() {
        let s = TypeStore::new();
        let r = run(&s, "(fun f (x : Any -> Any) = f x) 0", 1000);
        assert_eq!(r.outcome, Outcome::OutOfFuel);
        assert_eq!(r.steps, 1000);
        let r = reduce(&s, &internal(&s, "fst 3"), 10);
        assert!(matches!(
            r.outcome,
            Outcome::Stuck(StuckReason::NotAPair(_))
        ));
        assert_eq!(
            reduce(&s, &internal(&s, "f 3"), 10).outcome,
            Outcome::Open("f".into())
        );
    }

    #[test]
    fn application_does_not_capture_the_argument() {
        let s = TypeStore::new();
        let e = internal(&s, "let f = 1 in (fun f (x : Any -> Any) = (f, x)) f");
        let StepOutcome::Stepped { expr, rule, .. } = step(&s, &e) else {
            panic!()
        };
        assert_eq!(rule, Rule::Appl);
        assert_eq!(
            print_expr(&s, &expr),
            "let f = 1 in let %0 = fun f (x : Any -> Any) = (f, x) in let x = f in (%0, x)"
        );
    }
}
