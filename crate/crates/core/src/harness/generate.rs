//! Type-directed generation of well-typed source programs.
//!
//! Programs are built top-down from a goal type so that every subterm
//! synthesizes a subtype of the lifted goal. Abstractions are applied where
//! they are built; overloaded ones dispatch on their argument with a typecase.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::{parse_source, Expr, ParseOptions};
use crate::typecheck::{check_program, CheckOptions};
use crate::types::TypeStore;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Goal {
    Int,
    Bool,
    IntOrBool,
    Pair(Box<Goal>, Box<Goal>),
}

impl Goal {
    fn surface(&self) -> String {
        match self {
            Goal::Int => "Int".into(),
            Goal::Bool => "Bool".into(),
            Goal::IntOrBool => "(Int | Bool)".into(),
            Goal::Pair(a, b) => format!("({} * {})", a.surface(), b.surface()),
        }
    }

    fn pair(a: Goal, b: Goal) -> Goal {
        Goal::Pair(Box::new(a), Box::new(b))
    }
}

struct Gen {
    rng: ChaCha8Rng,
    names: usize,
}

impl Gen {
    fn fresh(&mut self, base: &str) -> String {
        self.names += 1;
        format!("{base}{}", self.names)
    }

    fn goal(&mut self, depth: usize) -> Goal {
        let n = if depth == 0 { 3 } else { 5 };
        match self.rng.gen_range(0..n) {
            0 => Goal::Int,
            1 => Goal::Bool,
            2 => Goal::IntOrBool,
            _ => Goal::pair(self.goal(depth - 1), self.goal(depth - 1)),
        }
    }

    fn constant(&mut self, g: &Goal) -> String {
        match g {
            Goal::Int => self.rng.gen_range(0..5).to_string(),
            Goal::Bool => self.rng.gen_bool(0.5).to_string(),
            Goal::IntOrBool => {
                let g = if self.rng.gen_bool(0.5) {
                    Goal::Int
                } else {
                    Goal::Bool
                };
                self.constant(&g)
            }
            Goal::Pair(a, b) => format!("({}, {})", self.constant(a), self.constant(b)),
        }
    }

    fn leaf(&mut self, g: &Goal, env: &[(String, Goal)]) -> String {
        let vars: Vec<&String> = env
            .iter()
            .filter(|(_, t)| fits(t, g))
            .map(|(x, _)| x)
            .collect();
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            return vars.choose(&mut self.rng).unwrap().to_string();
        }
        self.constant(g)
    }

    fn expr(&mut self, g: &Goal, size: usize, env: &[(String, Goal)]) -> String {
        if size <= 1 {
            return self.leaf(g, env);
        }
        let n = size - 1;
        match self.rng.gen_range(0..10) {
            0 | 1 => self.typecase(g, n, env),
            2 | 3 => self.overloaded(g, n, env),
            4 | 5 => self.apply(g, n, env),
            6 => {
                let other = self.goal(1);
                let (i, pair) = if self.rng.gen_bool(0.5) {
                    (1, Goal::pair(g.clone(), other))
                } else {
                    (2, Goal::pair(other, g.clone()))
                };
                let inner = self.expr(&pair, n, env);
                format!("{} {}", if i == 1 { "fst" } else { "snd" }, atom(&inner))
            }
            _ => match g {
                Goal::Pair(a, b) => {
                    let k = self.rng.gen_range(0..=n);
                    format!("({}, {})", self.expr(a, k, env), self.expr(b, n - k, env))
                }
                _ => self.typecase(g, n, env),
            },
        }
    }

    /// `case y = e in τ ? e1 : e2` over an `Int | Bool` or product scrutinee.
    fn typecase(&mut self, g: &Goal, size: usize, env: &[(String, Goal)]) -> String {
        let y = self.fresh("y");
        let (k, rest) = split3(&mut self.rng, size);
        if self.rng.gen_bool(0.7) {
            let scrut = self.expr(&Goal::IntOrBool, k, env);
            let (test, then_g, else_g) = if self.rng.gen_bool(0.5) {
                ("Int", Goal::Int, Goal::Bool)
            } else {
                ("Bool", Goal::Bool, Goal::Int)
            };
            let e1 = self.expr(g, rest.0, &extend(env, &y, then_g));
            let e2 = self.expr(g, rest.1, &extend(env, &y, else_g));
            format!("case {y} = {scrut} in {test} ? {e1} : {e2}")
        } else {
            let second = self.goal(1);
            let scrut = self.expr(&Goal::pair(Goal::IntOrBool, second.clone()), k, env);
            let e1 = self.expr(g, rest.0, &extend(env, &y, Goal::pair(Goal::Int, second)));
            let e2 = self.expr(g, rest.1, env);
            format!("case {y} = {scrut} in Int * Any ? {e1} : {e2}")
        }
    }

    /// `(fun f (x : (Int -> g) & (Bool -> g)) = case y = x in Int ? e1 : e2) arg`
    fn overloaded(&mut self, g: &Goal, size: usize, env: &[(String, Goal)]) -> String {
        let f = self.fresh("f");
        let x = self.fresh("x");
        let y = self.fresh("y");
        let (k, rest) = split3(&mut self.rng, size);
        let e1 = self.expr(g, rest.0, &extend(env, &y, Goal::Int));
        let e2 = self.expr(g, rest.1, &extend(env, &y, Goal::Bool));
        let arg = self.expr(&Goal::IntOrBool, k, env);
        let t = g.surface();
        format!("(fun {f} ({x} : (Int -> {t}) & (Bool -> {t})) = case {y} = {x} in Int ? {e1} : {e2}) {}", atom(&arg))
    }

    /// `(fun f (x : A -> g) = e) arg`
    fn apply(&mut self, g: &Goal, size: usize, env: &[(String, Goal)]) -> String {
        let f = self.fresh("f");
        let x = self.fresh("x");
        let dom = self.goal(1);
        let k = self.rng.gen_range(0..=size);
        let body = self.expr(g, size - k, &extend(env, &x, dom.clone()));
        let arg = self.expr(&dom, k, env);
        format!(
            "(fun {f} ({x} : {} -> {}) = {body}) {}",
            dom.surface(),
            g.surface(),
            atom(&arg)
        )
    }
}

/// Whether a variable of goal `have` may stand where `want` is expected.
fn fits(have: &Goal, want: &Goal) -> bool {
    match (have, want) {
        (a, b) if a == b => true,
        (Goal::Int | Goal::Bool, Goal::IntOrBool) => true,
        (Goal::Pair(a, b), Goal::Pair(c, d)) => fits(a, c) && fits(b, d),
        _ => false,
    }
}

fn extend(env: &[(String, Goal)], x: &str, g: Goal) -> Vec<(String, Goal)> {
    let mut v = env.to_vec();
    v.push((x.to_string(), g));
    v
}

fn split3(rng: &mut ChaCha8Rng, size: usize) -> (usize, (usize, usize)) {
    let k = rng.gen_range(0..=size);
    let rest = size - k;
    let a = rng.gen_range(0..=rest);
    (k, (a, rest - a))
}

fn atom(s: &str) -> String {
    let simple = s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        || (s.starts_with('(') && balanced_outer(s));
    if simple {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// Whether the parenthesis opening `s` closes at its last character.
fn balanced_outer(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return i == s.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

/// Source text of a generated program. The same seed and size always give
/// the same text.
pub fn generate_source(seed: u64, size: usize) -> String {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        names: 0,
    };
    let goal = g.goal(2);
    g.expr(&goal, size.max(1), &[])
}

/// A generated program, parsed and checked.
pub fn generate(store: &TypeStore, seed: u64, size: usize) -> Expr {
    let src = generate_source(seed, size);
    let e = parse_source(store, &src, ParseOptions::default())
        .unwrap_or_else(|err| panic!("generated program does not parse: {err}\n{src}"));
    if let Err(err) = check_program(store, &e, CheckOptions::default()) {
        panic!("generated program is ill-typed: {err}\n{src}");
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_programs_typecheck() {
        let s = TypeStore::new();
        for seed in 0..200 {
            generate(&s, seed, 1 + (seed as usize % 12));
        }
    }

    #[test]
    fn same_seed_same_program() {
        assert_eq!(generate_source(9, 8), generate_source(9, 8));
        assert_ne!(generate_source(9, 8), generate_source(10, 8));
    }
}
