//! Printing types in the textual grammar.
//!
//! Cycles are printed with `rec` binders. The surface printer writes lifted
//! constructors as plain `->` and `*`, and gives up when the type is not
//! expressible that way.

use std::collections::HashMap;

use super::base::{BaseDescriptor, IntSet};
use super::store::{TypeId, TypeNode, TypeStore};

const ARROW: u8 = 0;
const PROD: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOM: u8 = 5;

struct Printer<'s> {
    store: &'s TypeStore,
    surface: bool,
    /// Nodes on the current path, with the binder name if one was needed.
    active: HashMap<TypeId, Option<String>>,
    fresh: usize,
}

fn paren(s: String, own: u8, need: u8) -> String {
    if own < need {
        format!("({s})")
    } else {
        s
    }
}

fn print_ints(ints: &IntSet) -> Vec<(String, u8)> {
    match ints {
        IntSet::Finite(s) => s.iter().map(|n| (n.to_string(), ATOM)).collect(),
        IntSet::Cofinite(s) if s.is_empty() => vec![("Int".into(), ATOM)],
        IntSet::Cofinite(s) => {
            let holes: Vec<String> = s.iter().map(|n| n.to_string()).collect();
            let rhs = if holes.len() == 1 {
                holes[0].clone()
            } else {
                format!("({})", holes.join(" | "))
            };
            vec![(format!("Int \\ {rhs}"), AND)]
        }
    }
}

pub(crate) fn print_basic(d: &BaseDescriptor) -> (String, u8) {
    let mut parts = print_ints(&d.ints);
    match (d.has_true, d.has_false) {
        (true, true) => parts.push(("Bool".into(), ATOM)),
        (true, false) => parts.push(("tt".into(), ATOM)),
        (false, true) => parts.push(("ff".into(), ATOM)),
        (false, false) => {}
    }
    match parts.len() {
        0 => ("Empty".into(), ATOM),
        1 => parts.pop().unwrap(),
        _ => (
            parts
                .into_iter()
                .map(|(s, l)| paren(s, l, AND))
                .collect::<Vec<_>>()
                .join(" | "),
            OR,
        ),
    }
}

impl Printer<'_> {
    /// Prints `t` and reports its precedence level. `None` when the surface
    /// printer meets something it cannot express.
    fn go(&mut self, t: TypeId) -> Option<(String, u8)> {
        if let Some(slot) = self.active.get_mut(&t) {
            if slot.is_none() {
                self.fresh += 1;
                *slot = Some(format!("X{}", self.fresh));
            }
            return Some((slot.clone().unwrap(), ATOM));
        }
        self.active.insert(t, None);
        let body = self.node(t);
        let binder = self.active.remove(&t).flatten();
        let (s, l) = body?;
        Some(match binder {
            Some(x) => (format!("rec {x}. {s}"), ARROW),
            None => (s, l),
        })
    }

    fn at(&mut self, t: TypeId, need: u8) -> Option<String> {
        let (s, l) = self.go(t)?;
        Some(paren(s, l, need))
    }

    /// Strips the `∨ ⊥` of a lifted component for surface printing.
    fn unlifted(&mut self, t: TypeId, need: u8) -> Option<String> {
        let s = self.store;
        if t == s.bot() {
            return Some("Empty".into());
        }
        if t == s.any() {
            return Some("Any".into());
        }
        match s.node(t) {
            TypeNode::Union(ms) if ms.contains(&s.bot()) => {
                let rest: Vec<TypeId> = ms.into_iter().filter(|&m| m != s.bot()).collect();
                if rest.len() == 1 {
                    self.at(rest[0], need)
                } else {
                    let parts: Option<Vec<String>> =
                        rest.into_iter().map(|m| self.at(m, AND)).collect();
                    Some(paren(parts?.join(" | "), OR, need))
                }
            }
            _ => None,
        }
    }

    fn node(&mut self, t: TypeId) -> Option<(String, u8)> {
        let s = self.store;
        if t == s.any() {
            return Some(("Any".into(), ATOM));
        }
        Some(match s.node(t) {
            TypeNode::Empty => ("Empty".into(), ATOM),
            TypeNode::Bot => {
                if self.surface {
                    return None;
                }
                ("Bot".into(), ATOM)
            }
            TypeNode::Basic(d) => print_basic(&d),
            TypeNode::Prod(a, b) => {
                let (a, b) = if self.surface {
                    (self.unlifted(a, OR)?, self.unlifted(b, PROD)?)
                } else {
                    (self.at(a, OR)?, self.at(b, PROD)?)
                };
                (format!("{a} * {b}"), PROD)
            }
            TypeNode::Arrow(a, b) => {
                let (a, b) = if self.surface {
                    if a == s.empty() && b == s.any() {
                        ("Empty".to_string(), "Any".to_string())
                    } else {
                        (self.unlifted(a, PROD)?, self.unlifted(b, ARROW)?)
                    }
                } else {
                    (self.at(a, PROD)?, self.at(b, ARROW)?)
                };
                (format!("{a} -> {b}"), ARROW)
            }
            TypeNode::Union(mut ms) => {
                // Bot goes last: `t | Bot` reads as a lifted type.
                ms.sort_by_key(|&m| m == s.bot());
                let parts: Option<Vec<String>> = ms.into_iter().map(|m| self.at(m, AND)).collect();
                (parts?.join(" | "), OR)
            }
            TypeNode::Neg(x) => match s.node(x) {
                TypeNode::Union(ms) if !s.is_pending(x) => {
                    let mut parts = Vec::new();
                    for m in ms {
                        match s.node(m) {
                            TypeNode::Neg(y) => parts.push(self.at(y, NOT)?),
                            _ => parts.push(format!("~{}", self.at(m, NOT)?)),
                        }
                    }
                    (parts.join(" & "), AND)
                }
                _ => (format!("~{}", self.at(x, NOT)?), NOT),
            },
        })
    }
}

/// Prints `t` with plain constructors; `Bot` is written explicitly.
pub fn print_type(store: &TypeStore, t: TypeId) -> String {
    let mut p = Printer {
        store,
        surface: false,
        active: HashMap::new(),
        fresh: 0,
    };
    p.go(t).expect("raw printing is total").0
}

/// Prints `t` in the surface grammar, where `->` and `*` stand for the
/// lifted constructors. Returns `None` when `t` has no such reading.
pub fn print_surface(store: &TypeStore, t: TypeId) -> Option<String> {
    let mut p = Printer {
        store,
        surface: true,
        active: HashMap::new(),
        fresh: 0,
    };
    p.go(t).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::build::{build_interface, build_type, BuildMode};
    use crate::types::syntax::parse_type_expr;

    fn raw(s: &TypeStore, src: &str) -> TypeId {
        build_type(s, &parse_type_expr(src).unwrap(), BuildMode::Raw).unwrap()
    }

    #[test]
    fn negation_interface_prints_in_surface_form() {
        let s = TypeStore::new();
        let i = build_interface(&s, &parse_type_expr("(tt -> ff) & (ff -> tt)").unwrap()).unwrap();
        assert_eq!(print_surface(&s, i.ty).unwrap(), "(tt -> ff) & (ff -> tt)");
    }

    #[test]
    fn raw_round_trip_is_a_fixpoint() {
        for src in [
            "Int \\ 3 | Bool",
            "(Int -> Int) & (Bool -> Bool)",
            "Bot * Int | Int * Bot",
            "rec X. 1 * X | Bool",
            "~(Int | Bool) & Any * Any",
            "(Int -> Int) -> -2",
        ] {
            let s = TypeStore::new();
            let once = print_type(&s, raw(&s, src));
            let twice = print_type(&s, raw(&s, &once));
            assert_eq!(once, twice, "source {src}");
        }
    }

    #[test]
    fn unlifted_arrow_has_no_surface_form() {
        let s = TypeStore::new();
        assert!(print_surface(&s, s.arrow(s.int(), s.int())).is_none());
        assert_eq!(print_type(&s, s.lift_bot(s.int())), "Int | Bot");
    }
}
