use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;

use super::base::{BaseDescriptor, Constant};
use crate::subtype::Memo;

/// Handle to a hash-consed type node. Only meaningful for the store that issued it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeNode {
    Bot,
    Basic(BaseDescriptor),
    Prod(TypeId, TypeId),
    Arrow(TypeId, TypeId),
    Union(Vec<TypeId>),
    Neg(TypeId),
    Empty,
}

impl TypeNode {
    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            TypeNode::Bot | TypeNode::Basic(_) | TypeNode::Prod(..) | TypeNode::Arrow(..)
        )
    }

    pub fn children(&self) -> Vec<TypeId> {
        match self {
            TypeNode::Prod(a, b) | TypeNode::Arrow(a, b) => vec![*a, *b],
            TypeNode::Union(ms) => ms.clone(),
            TypeNode::Neg(t) => vec![*t],
            TypeNode::Bot | TypeNode::Basic(_) | TypeNode::Empty => Vec::new(),
        }
    }
}

/// Arena of hash-consed type nodes plus the memo tables of the subtyping engine.
///
/// A store is single-owner: it uses interior mutability and is neither `Send`
/// nor `Sync`. Independent stores share nothing.
pub struct TypeStore {
    nodes: RefCell<Vec<TypeNode>>,
    table: RefCell<HashMap<TypeNode, TypeId>>,
    pending: RefCell<HashSet<TypeId>>,
    pub(crate) memo: RefCell<Memo>,
    empty: TypeId,
    any: TypeId,
    bot: TypeId,
    int: TypeId,
    boolean: TypeId,
    top_prod: TypeId,
    top_arrow: TypeId,
}

impl Default for TypeStore {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for TypeStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeStore")
            .field("nodes", &self.nodes.borrow().len())
            .finish()
    }
}

impl TypeStore {
    pub fn new() -> Self {
        let placeholder = TypeId(0);
        let mut store = TypeStore {
            nodes: RefCell::new(Vec::new()),
            table: RefCell::new(HashMap::new()),
            pending: RefCell::new(HashSet::new()),
            memo: RefCell::new(Memo::default()),
            empty: placeholder,
            any: placeholder,
            bot: placeholder,
            int: placeholder,
            boolean: placeholder,
            top_prod: placeholder,
            top_arrow: placeholder,
        };
        store.empty = store.intern(TypeNode::Empty);
        store.any = store.intern(TypeNode::Neg(store.empty));
        store.bot = store.intern(TypeNode::Bot);
        store.int = store.intern(TypeNode::Basic(BaseDescriptor::int()));
        store.boolean = store.intern(TypeNode::Basic(BaseDescriptor::boolean()));
        store.top_prod = store.intern(TypeNode::Prod(store.any, store.any));
        store.top_arrow = store.intern(TypeNode::Arrow(store.empty, store.any));
        store
    }

    /// Number of distinct nodes interned so far.
    pub fn node_count(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn node(&self, id: TypeId) -> TypeNode {
        self.nodes.borrow()[id.index()].clone()
    }

    pub(crate) fn is_pending(&self, id: TypeId) -> bool {
        self.pending.borrow().contains(&id)
    }

    fn intern(&self, node: TypeNode) -> TypeId {
        if let Some(&id) = self.table.borrow().get(&node) {
            return id;
        }
        let mut nodes = self.nodes.borrow_mut();
        let id = TypeId(u32::try_from(nodes.len()).expect("type store overflow"));
        nodes.push(node.clone());
        self.table.borrow_mut().insert(node, id);
        id
    }

    /// Canonical constructor. Flattens unions, sorts their members, merges
    /// basic members, and collapses double negation.
    pub fn mk(&self, node: TypeNode) -> TypeId {
        match node {
            TypeNode::Basic(d) if d.is_empty() => self.empty,
            TypeNode::Neg(t) => {
                if !self.is_pending(t) {
                    if let TypeNode::Neg(inner) = self.node(t) {
                        return inner;
                    }
                }
                self.intern(TypeNode::Neg(t))
            }
            TypeNode::Union(members) => self.mk_union(members),
            other => self.intern(other),
        }
    }

    fn mk_union(&self, members: Vec<TypeId>) -> TypeId {
        let mut flat = Vec::with_capacity(members.len());
        let mut stack = members;
        let mut basic: Option<BaseDescriptor> = None;
        while let Some(m) = stack.pop() {
            if m == self.empty {
                continue;
            }
            if m == self.any {
                return self.any;
            }
            if self.is_pending(m) {
                flat.push(m);
                continue;
            }
            match self.node(m) {
                TypeNode::Union(inner) => stack.extend(inner),
                TypeNode::Basic(d) => {
                    basic = Some(match basic {
                        Some(acc) => acc.union(&d),
                        None => d,
                    })
                }
                _ => flat.push(m),
            }
        }
        if let Some(d) = basic {
            if !d.is_empty() {
                flat.push(self.intern(TypeNode::Basic(d)));
            }
        }
        flat.sort();
        flat.dedup();
        for &m in &flat {
            if !self.is_pending(m) {
                if let TypeNode::Neg(inner) = self.node(m) {
                    if flat.binary_search(&inner).is_ok() {
                        return self.any;
                    }
                }
            }
        }
        match flat.len() {
            0 => self.empty,
            1 => flat[0],
            _ => self.intern(TypeNode::Union(flat)),
        }
    }

    pub fn empty(&self) -> TypeId {
        self.empty
    }

    pub fn any(&self) -> TypeId {
        self.any
    }

    pub fn bot(&self) -> TypeId {
        self.bot
    }

    pub fn int(&self) -> TypeId {
        self.int
    }

    pub fn boolean(&self) -> TypeId {
        self.boolean
    }

    /// `1 × 1`, the top of the product kind.
    pub fn top_prod(&self) -> TypeId {
        self.top_prod
    }

    /// `0 → 1`, the top of the arrow kind.
    pub fn top_arrow(&self) -> TypeId {
        self.top_arrow
    }

    pub fn basic(&self, d: BaseDescriptor) -> TypeId {
        self.mk(TypeNode::Basic(d))
    }

    /// Singleton type of a constant.
    pub fn constant(&self, c: &Constant) -> TypeId {
        self.basic(BaseDescriptor::singleton(c))
    }

    pub fn int_lit(&self, n: i64) -> TypeId {
        self.constant(&Constant::int(n))
    }

    pub fn bool_lit(&self, b: bool) -> TypeId {
        self.constant(&Constant::Bool(b))
    }

    pub fn prod(&self, a: TypeId, b: TypeId) -> TypeId {
        self.mk(TypeNode::Prod(a, b))
    }

    pub fn arrow(&self, a: TypeId, b: TypeId) -> TypeId {
        self.mk(TypeNode::Arrow(a, b))
    }

    pub fn neg(&self, t: TypeId) -> TypeId {
        self.mk(TypeNode::Neg(t))
    }

    pub fn or(&self, a: TypeId, b: TypeId) -> TypeId {
        self.mk(TypeNode::Union(vec![a, b]))
    }

    pub fn or_all<I: IntoIterator<Item = TypeId>>(&self, ts: I) -> TypeId {
        self.mk(TypeNode::Union(ts.into_iter().collect()))
    }

    /// `t1 ∧ t2 = ¬(¬t1 ∨ ¬t2)`.
    pub fn and(&self, a: TypeId, b: TypeId) -> TypeId {
        if a == b || b == self.any {
            return a;
        }
        if a == self.any {
            return b;
        }
        if a == self.empty || b == self.empty {
            return self.empty;
        }
        if !self.is_pending(a) && !self.is_pending(b) {
            if let (TypeNode::Basic(x), TypeNode::Basic(y)) = (self.node(a), self.node(b)) {
                return self.basic(x.intersection(&y));
            }
        }
        let na = self.neg(a);
        let nb = self.neg(b);
        let u = self.or(na, nb);
        self.neg(u)
    }

    pub fn and_all<I: IntoIterator<Item = TypeId>>(&self, ts: I) -> TypeId {
        ts.into_iter().fold(self.any, |acc, t| self.and(acc, t))
    }

    /// `t1 \ t2 = t1 ∧ ¬t2`.
    pub fn diff(&self, a: TypeId, b: TypeId) -> TypeId {
        let nb = self.neg(b);
        self.and(a, nb)
    }

    /// `t? = t ∨ ⊥`.
    pub fn lift_bot(&self, t: TypeId) -> TypeId {
        self.or(t, self.bot)
    }

    /// `t1 →⊥ t2 = t1? → t2?`.
    pub fn lifted_arrow(&self, a: TypeId, b: TypeId) -> TypeId {
        self.arrow(self.lift_bot(a), self.lift_bot(b))
    }

    /// `t1 ×⊥ t2 = t1? × t2?`.
    pub fn lifted_prod(&self, a: TypeId, b: TypeId) -> TypeId {
        self.prod(self.lift_bot(a), self.lift_bot(b))
    }

    /// Allocates a node slot for a recursive binder whose body is not known yet.
    pub(crate) fn reserve(&self) -> TypeId {
        let mut nodes = self.nodes.borrow_mut();
        let id = TypeId(u32::try_from(nodes.len()).expect("type store overflow"));
        nodes.push(TypeNode::Empty);
        self.pending.borrow_mut().insert(id);
        id
    }

    /// Fixes the content of a reserved slot. The slot is not entered in the
    /// hash-consing table: recursive nodes are identified by their slot.
    pub(crate) fn define(&self, slot: TypeId, node: TypeNode) {
        self.nodes.borrow_mut()[slot.index()] = node;
        self.pending.borrow_mut().remove(&slot);
    }

    /// Removes a reserved slot from the pending set without giving it content.
    pub(crate) fn abandon(&self, slot: TypeId) {
        self.pending.borrow_mut().remove(&slot);
    }

    /// All node ids reachable from `root`, in depth-first preorder.
    pub fn reachable(&self, root: TypeId) -> Vec<TypeId> {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            order.push(id);
            let mut children = self.node(id).children();
            children.reverse();
            stack.extend(children);
        }
        order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_consing_identity() {
        let s = TypeStore::new();
        assert_eq!(s.mk(TypeNode::Empty), s.mk(TypeNode::Empty));
        let u1 = s.mk(TypeNode::Union(vec![s.int(), s.boolean()]));
        let u2 = s.mk(TypeNode::Union(vec![s.int(), s.boolean()]));
        assert_eq!(u1, u2);
        assert_eq!(s.mk(TypeNode::Neg(s.mk(TypeNode::Empty))), s.any());
    }

    #[test]
    fn union_is_flat_and_sorted() {
        let s = TypeStore::new();
        let p = s.prod(s.int(), s.int());
        let a = s.arrow(s.int(), s.int());
        let inner = s.or(p, a);
        let outer = s.or(inner, s.bot());
        let outer2 = s.or_all([s.bot(), a, p]);
        assert_eq!(outer, outer2);
        match s.node(outer) {
            TypeNode::Union(ms) => {
                assert_eq!(ms.len(), 3);
                assert!(ms.windows(2).all(|w| w[0] < w[1]));
            }
            other => panic!("expected a union, got {other:?}"),
        }
    }

    #[test]
    fn double_negation_collapses() {
        let s = TypeStore::new();
        let p = s.prod(s.int(), s.bot());
        assert_eq!(s.neg(s.neg(p)), p);
    }

    #[test]
    fn basic_members_merge() {
        let s = TypeStore::new();
        let u = s.or(s.int_lit(1), s.int());
        assert_eq!(u, s.int());
        assert_eq!(s.and(s.int(), s.boolean()), s.empty());
    }

    #[test]
    fn union_with_complement_is_any() {
        let s = TypeStore::new();
        let p = s.prod(s.int(), s.int());
        assert_eq!(s.or(p, s.neg(p)), s.any());
    }
}
