//! Source and internal expressions: syntax tree, parser, printer,
//! compilation, `Typeof` and the answer/value classifiers.

mod compile;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::rc::Rc;

pub use compile::compile;
pub use parse::{parse_internal, parse_source, ParseOptions};
pub use print::print_expr;

use crate::lexer::RESERVED_PREFIX;
use crate::types::{Constant, Interface, TypeId, TypeStore};

/// `fun f (x : Π) = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abstr {
    pub f: String,
    pub iface: Interface,
    pub x: String,
    pub body: Expr,
}

/// `case x = scrutinee in test ? then_e : else_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub x: String,
    pub scrutinee: Expr,
    pub test: TypeId,
    pub then_e: Expr,
    pub else_e: Expr,
}

/// `let x = bound in body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Let {
    pub x: String,
    pub bound: Expr,
    pub body: Expr,
}

/// Expressions of both languages. Source programs contain no `Let`; the
/// typecase scrutinee of an internal program is a check form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(Constant),
    Abstr(Rc<Abstr>),
    App(Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    /// Projection on component 1 or 2.
    Proj(u8, Box<Expr>),
    Case(Box<Case>),
    Let(Box<Let>),
}

impl Expr {
    pub fn var(x: impl Into<String>) -> Self {
        Expr::Var(x.into())
    }

    pub fn int(n: i64) -> Self {
        Expr::Const(Constant::int(n))
    }

    pub fn boolean(b: bool) -> Self {
        Expr::Const(Constant::Bool(b))
    }

    pub fn app(f: Expr, a: Expr) -> Self {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: Expr, b: Expr) -> Self {
        Expr::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(i: u8, e: Expr) -> Self {
        Expr::Proj(i, Box::new(e))
    }

    pub fn abstr(f: impl Into<String>, iface: Interface, x: impl Into<String>, body: Expr) -> Self {
        Expr::Abstr(Rc::new(Abstr {
            f: f.into(),
            iface,
            x: x.into(),
            body,
        }))
    }

    pub fn case(
        x: impl Into<String>,
        scrutinee: Expr,
        test: TypeId,
        then_e: Expr,
        else_e: Expr,
    ) -> Self {
        Expr::Case(Box::new(Case {
            x: x.into(),
            scrutinee,
            test,
            then_e,
            else_e,
        }))
    }

    pub fn let_in(x: impl Into<String>, bound: Expr, body: Expr) -> Self {
        Expr::Let(Box::new(Let {
            x: x.into(),
            bound,
            body,
        }))
    }

    /// `c | λ`.
    pub fn is_value(&self) -> bool {
        matches!(self, Expr::Const(_) | Expr::Abstr(_))
    }

    /// `c | λ | (e, e) | let x = e in a`.
    pub fn is_answer(&self) -> bool {
        let mut e = self;
        loop {
            match e {
                Expr::Const(_) | Expr::Abstr(_) | Expr::Pair(..) => return true,
                Expr::Let(l) => e = &l.body,
                _ => return false,
            }
        }
    }

    /// `χ ::= x | c | λ | (χ, χ)`.
    pub fn is_check_form(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) | Expr::Abstr(_) => true,
            Expr::Pair(a, b) => a.is_check_form() && b.is_check_form(),
            _ => false,
        }
    }

    pub fn contains_let(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => false,
            Expr::Abstr(a) => a.body.contains_let(),
            Expr::App(a, b) | Expr::Pair(a, b) => a.contains_let() || b.contains_let(),
            Expr::Proj(_, e) => e.contains_let(),
            Expr::Case(c) => {
                c.scrutinee.contains_let() || c.then_e.contains_let() || c.else_e.contains_let()
            }
            Expr::Let(_) => true,
        }
    }

    /// Whether every typecase scrutinee is a check form.
    pub fn is_internal_form(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => true,
            Expr::Abstr(a) => a.body.is_internal_form(),
            Expr::App(a, b) | Expr::Pair(a, b) => a.is_internal_form() && b.is_internal_form(),
            Expr::Proj(_, e) => e.is_internal_form(),
            Expr::Case(c) => {
                c.scrutinee.is_check_form()
                    && c.scrutinee.is_internal_form()
                    && c.then_e.is_internal_form()
                    && c.else_e.is_internal_form()
            }
            Expr::Let(l) => l.bound.is_internal_form() && l.body.is_internal_form(),
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Var(_) | Expr::Const(_) => 0,
            Expr::Abstr(a) => a.body.size(),
            Expr::App(a, b) | Expr::Pair(a, b) => a.size() + b.size(),
            Expr::Proj(_, e) => e.size(),
            Expr::Case(c) => c.scrutinee.size() + c.then_e.size() + c.else_e.size(),
            Expr::Let(l) => l.bound.size() + l.body.size(),
        }
    }
}

/// Answer/value status of an expression. Values are answers.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AnswerClass {
    Value,
    AnswerOnly,
    Neither,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub answer: AnswerClass,
    pub check_form: bool,
}

pub fn classify(e: &Expr) -> Classification {
    let answer = if e.is_value() {
        AnswerClass::Value
    } else if e.is_answer() {
        AnswerClass::AnswerOnly
    } else {
        AnswerClass::Neither
    };
    Classification {
        answer,
        check_form: e.is_check_form(),
    }
}

/// `Typeof(χ)`. Variables get `1`, abstractions `0 → 1`.
pub fn typeof_check(store: &TypeStore, chi: &Expr) -> Option<TypeId> {
    Some(match chi {
        Expr::Var(_) => store.any(),
        Expr::Const(c) => store.constant(c),
        Expr::Abstr(_) => store.top_arrow(),
        Expr::Pair(a, b) => store.prod(typeof_check(store, a)?, typeof_check(store, b)?),
        _ => return None,
    })
}

pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(e, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(e: &'a Expr, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match e {
        Expr::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        Expr::Const(_) => {}
        Expr::Abstr(a) => {
            bound.push(&a.f);
            bound.push(&a.x);
            collect_free(&a.body, bound, out);
            bound.truncate(bound.len() - 2);
        }
        Expr::App(a, b) | Expr::Pair(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Expr::Proj(_, e) => collect_free(e, bound, out),
        Expr::Case(c) => {
            collect_free(&c.scrutinee, bound, out);
            bound.push(&c.x);
            collect_free(&c.then_e, bound, out);
            collect_free(&c.else_e, bound, out);
            bound.pop();
        }
        Expr::Let(l) => {
            collect_free(&l.bound, bound, out);
            bound.push(&l.x);
            collect_free(&l.body, bound, out);
            bound.pop();
        }
    }
}

pub fn occurs_free(x: &str, e: &Expr) -> bool {
    free_vars(e).contains(x)
}

/// Supply of reserved names `%N` that do not occur in a given term.
#[derive(Clone, Debug)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn for_expr(e: &Expr) -> Self {
        let mut max = 0;
        visit_names(e, &mut |n| {
            if let Some(k) = n
                .strip_prefix(RESERVED_PREFIX)
                .and_then(|d| d.parse::<u64>().ok())
            {
                max = max.max(k + 1);
            }
        });
        Fresh { next: max }
    }

    pub fn starting_at(next: u64) -> Self {
        Fresh { next }
    }

    pub fn name(&mut self) -> String {
        let n = format!("{RESERVED_PREFIX}{}", self.next);
        self.next += 1;
        n
    }
}

fn visit_names(e: &Expr, f: &mut impl FnMut(&str)) {
    match e {
        Expr::Var(x) => f(x),
        Expr::Const(_) => {}
        Expr::Abstr(a) => {
            f(&a.f);
            f(&a.x);
            visit_names(&a.body, f);
        }
        Expr::App(a, b) | Expr::Pair(a, b) => {
            visit_names(a, f);
            visit_names(b, f);
        }
        Expr::Proj(_, e) => visit_names(e, f),
        Expr::Case(c) => {
            f(&c.x);
            visit_names(&c.scrutinee, f);
            visit_names(&c.then_e, f);
            visit_names(&c.else_e, f);
        }
        Expr::Let(l) => {
            f(&l.x);
            visit_names(&l.bound, f);
            visit_names(&l.body, f);
        }
    }
}

/// Renames the free occurrences of `from` to the variable `to`, which must
/// not be bound anywhere inside `e`.
pub fn rename(e: &Expr, from: &str, to: &str) -> Expr {
    substitute_with(
        e,
        from,
        &Expr::var(to),
        &mut Fresh::starting_at(u64::MAX / 2),
    )
}

/// `e[r/x]`, renaming binders of `e` that would capture free variables of `r`.
pub fn substitute(e: &Expr, x: &str, r: &Expr, fresh: &mut Fresh) -> Expr {
    substitute_with(e, x, r, fresh)
}

fn substitute_with(e: &Expr, x: &str, r: &Expr, fresh: &mut Fresh) -> Expr {
    let fv = free_vars(r);
    subst(e, x, r, &fv, fresh)
}

/// Opens a binder `y` over `body` for substitution: renames it when it
/// would capture a free variable of the replacement.
fn open_binder(y: &str, body: &Expr, fv: &BTreeSet<String>, fresh: &mut Fresh) -> (String, Expr) {
    if fv.contains(y) {
        let z = fresh.name();
        (
            z.clone(),
            subst(body, y, &Expr::var(&z), &BTreeSet::from([z.clone()]), fresh),
        )
    } else {
        (y.to_string(), body.clone())
    }
}

fn subst(e: &Expr, x: &str, r: &Expr, fv: &BTreeSet<String>, fresh: &mut Fresh) -> Expr {
    match e {
        Expr::Var(y) => {
            if y == x {
                r.clone()
            } else {
                e.clone()
            }
        }
        Expr::Const(_) => e.clone(),
        Expr::Abstr(a) => {
            if a.f == x || a.x == x || !occurs_free(x, &a.body) {
                return e.clone();
            }
            let (f, body) = open_binder(&a.f, &a.body, fv, fresh);
            let (y, body) = open_binder(&a.x, &body, fv, fresh);
            let body = subst(&body, x, r, fv, fresh);
            Expr::abstr(f, a.iface.clone(), y, body)
        }
        Expr::App(a, b) => Expr::app(subst(a, x, r, fv, fresh), subst(b, x, r, fv, fresh)),
        Expr::Pair(a, b) => Expr::pair(subst(a, x, r, fv, fresh), subst(b, x, r, fv, fresh)),
        Expr::Proj(i, a) => Expr::proj(*i, subst(a, x, r, fv, fresh)),
        Expr::Case(c) => {
            let scrutinee = subst(&c.scrutinee, x, r, fv, fresh);
            if c.x == x {
                return Expr::case(&c.x, scrutinee, c.test, c.then_e.clone(), c.else_e.clone());
            }
            let (y, then_e) = open_binder(&c.x, &c.then_e, fv, fresh);
            let else_e = if y == c.x {
                c.else_e.clone()
            } else {
                rename(&c.else_e, &c.x, &y)
            };
            Expr::case(
                y,
                scrutinee,
                c.test,
                subst(&then_e, x, r, fv, fresh),
                subst(&else_e, x, r, fv, fresh),
            )
        }
        Expr::Let(l) => {
            let bound = subst(&l.bound, x, r, fv, fresh);
            if l.x == x {
                return Expr::let_in(&l.x, bound, l.body.clone());
            }
            let (y, body) = open_binder(&l.x, &l.body, fv, fresh);
            Expr::let_in(y, bound, subst(&body, x, r, fv, fresh))
        }
    }
}
