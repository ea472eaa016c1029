//! Membership of node graphs in the two restricted surface grammars.

use std::collections::HashSet;

use super::store::{TypeId, TypeNode, TypeStore};

#[derive(Copy, Clone, PartialEq, Eq, Hash)]
enum Grammar {
    Interface,
    Test,
}

struct Checker<'s> {
    store: &'s TypeStore,
    grammar: Grammar,
    assumed: HashSet<(TypeId, bool)>,
}

impl Checker<'_> {
    fn plain(&mut self, t: TypeId) -> bool {
        if !self.assumed.insert((t, false)) {
            return true;
        }
        let s = self.store;
        match s.node(t) {
            TypeNode::Basic(_) | TypeNode::Empty => true,
            TypeNode::Bot => false,
            TypeNode::Neg(x) => self.plain(x),
            TypeNode::Union(ms) => ms.into_iter().all(|m| self.plain(m)),
            TypeNode::Prod(a, b) => self.lifted(a) && self.lifted(b),
            TypeNode::Arrow(a, b) => match self.grammar {
                Grammar::Interface => self.lifted(a) && self.lifted(b),
                Grammar::Test => a == s.empty() && b == s.any(),
            },
        }
    }

    /// Is `t` of the form `T ∨ ⊥` for some `T` of the grammar?
    fn lifted(&mut self, t: TypeId) -> bool {
        if !self.assumed.insert((t, true)) {
            return true;
        }
        let s = self.store;
        if t == s.bot() || t == s.any() {
            return true;
        }
        match s.node(t) {
            TypeNode::Union(ms) if ms.contains(&s.bot()) => ms
                .into_iter()
                .filter(|&m| m != s.bot())
                .all(|m| self.plain(m)),
            _ => false,
        }
    }
}

/// Is `t` generated by the interface grammar `T`?
pub fn validate_interface(store: &TypeStore, t: TypeId) -> bool {
    Checker {
        store,
        grammar: Grammar::Interface,
        assumed: HashSet::new(),
    }
    .plain(t)
}

/// Is `t` generated by the typecase grammar `τ`?
pub fn validate_testtype(store: &TypeStore, t: TypeId) -> bool {
    Checker {
        store,
        grammar: Grammar::Test,
        assumed: HashSet::new(),
    }
    .plain(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifted_arrow_is_interface() {
        let s = TypeStore::new();
        assert!(validate_interface(&s, s.lifted_arrow(s.int(), s.int())));
        assert!(!validate_interface(&s, s.arrow(s.int(), s.int())));
        assert!(!validate_interface(&s, s.bot()));
    }

    #[test]
    fn test_types_only_use_top_arrow() {
        let s = TypeStore::new();
        let p = s.lifted_prod(s.int(), s.boolean());
        assert!(validate_testtype(&s, s.or(s.top_arrow(), p)));
        assert!(!validate_testtype(&s, s.arrow(s.int(), s.int())));
        assert!(!validate_testtype(&s, s.lifted_arrow(s.empty(), s.any())));
    }
}
