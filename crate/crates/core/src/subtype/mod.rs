//! Emptiness, subtyping and equivalence.
//!
//! Types are normalized into disjunctive normal form over four kinds of
//! atoms (⊥, basic, product, arrow). A type is empty iff every line is.
//! Product and arrow lines recurse into their components through a memo
//! that assumes lines under test to be empty: a cycle contributes no finite
//! inhabitant, which matches the inductive interpretation domain.

mod ops;

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

pub use ops::{
    apply_type, arrows_of, domain_of, interface_disjoint, make_fully_disjoint, partition,
    product_decompose, proj_type, OpError,
};

use crate::types::{BaseDescriptor, TypeEnv, TypeId, TypeNode, TypeStore};

/// The four kinds of atoms.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Bot,
    Basic,
    Prod,
    Arrow,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Bot, Kind::Basic, Kind::Prod, Kind::Arrow];
}

/// One conjunction `⋀P ∧ ⋀¬N` of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnfLine {
    pub pos: Vec<TypeId>,
    pub neg: Vec<TypeId>,
}

/// A union of lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dnf {
    pub lines: Vec<DnfLine>,
}

/// The lines of a type grouped by atom kind. Every line's positive part
/// holds atoms of its group's kind only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KindSplit {
    pub bot: Vec<DnfLine>,
    pub basic: Vec<DnfLine>,
    pub prod: Vec<DnfLine>,
    pub arrow: Vec<DnfLine>,
}

impl KindSplit {
    pub fn get(&self, k: Kind) -> &[DnfLine] {
        match k {
            Kind::Bot => &self.bot,
            Kind::Basic => &self.basic,
            Kind::Prod => &self.prod,
            Kind::Arrow => &self.arrow,
        }
    }

    fn get_mut(&mut self, k: Kind) -> &mut Vec<DnfLine> {
        match k {
            Kind::Bot => &mut self.bot,
            Kind::Basic => &mut self.basic,
            Kind::Prod => &mut self.prod,
            Kind::Arrow => &mut self.arrow,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Type(TypeId),
    Line(Kind, Vec<TypeId>, Vec<TypeId>),
}

/// Caches of the subtyping engine. Lives inside the store.
#[derive(Default)]
pub(crate) struct Memo {
    dnf: HashMap<TypeId, Rc<Vec<DnfLine>>>,
    dnf_neg: HashMap<TypeId, Rc<Vec<DnfLine>>>,
    done: HashMap<Key, bool>,
    /// Results that assumed some line under test to be empty.
    provisional: HashSet<Key>,
    log: Vec<Key>,
    in_progress: HashSet<Key>,
}

pub(crate) fn kind_of(store: &TypeStore, atom: TypeId) -> Kind {
    match store.node(atom) {
        TypeNode::Bot => Kind::Bot,
        TypeNode::Basic(_) => Kind::Basic,
        TypeNode::Prod(..) => Kind::Prod,
        TypeNode::Arrow(..) => Kind::Arrow,
        other => unreachable!("not an atom: {other:?}"),
    }
}

fn basic_of(store: &TypeStore, atom: TypeId) -> BaseDescriptor {
    match store.node(atom) {
        TypeNode::Basic(d) => d,
        _ => unreachable!("not a basic atom"),
    }
}

/// Canonical form of a line, or `None` when it is trivially empty.
fn normalize(store: &TypeStore, mut pos: Vec<TypeId>, mut neg: Vec<TypeId>) -> Option<DnfLine> {
    pos.sort();
    pos.dedup();
    neg.sort();
    neg.dedup();
    if pos.iter().any(|p| neg.binary_search(p).is_ok()) {
        return None;
    }
    let mut kind = None;
    for &p in &pos {
        let k = kind_of(store, p);
        match kind {
            None => kind = Some(k),
            Some(k0) if k0 != k => return None,
            _ => {}
        }
    }
    match kind {
        Some(Kind::Basic) => {
            let mut d = BaseDescriptor::all();
            for &p in &pos {
                d = d.intersection(&basic_of(store, p));
            }
            for &n in &neg {
                if kind_of(store, n) == Kind::Basic {
                    d = d.difference(&basic_of(store, n));
                }
            }
            if d.is_empty() {
                return None;
            }
            Some(DnfLine {
                pos: vec![store.basic(d)],
                neg: Vec::new(),
            })
        }
        Some(Kind::Bot) => Some(DnfLine {
            pos,
            neg: Vec::new(),
        }),
        Some(k) => {
            neg.retain(|&n| kind_of(store, n) == k);
            Some(DnfLine { pos, neg })
        }
        None => {
            let mut merged = BaseDescriptor::empty();
            let mut rest = Vec::new();
            for &n in &neg {
                if kind_of(store, n) == Kind::Basic {
                    merged = merged.union(&basic_of(store, n));
                } else {
                    rest.push(n);
                }
            }
            if !merged.is_empty() {
                rest.push(store.basic(merged));
                rest.sort();
            }
            Some(DnfLine { pos, neg: rest })
        }
    }
}

fn cross(store: &TypeStore, a: &[DnfLine], b: &[DnfLine]) -> Vec<DnfLine> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let pos = x.pos.iter().chain(&y.pos).copied().collect();
            let neg = x.neg.iter().chain(&y.neg).copied().collect();
            if let Some(l) = normalize(store, pos, neg) {
                out.push(l);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

impl TypeStore {
    fn dnf_lines(&self, t: TypeId) -> Rc<Vec<DnfLine>> {
        if let Some(d) = self.memo.borrow().dnf.get(&t) {
            return d.clone();
        }
        let lines = match self.node(t) {
            TypeNode::Empty => Vec::new(),
            TypeNode::Union(ms) => {
                let mut out = Vec::new();
                for m in ms {
                    out.extend(self.dnf_lines(m).iter().cloned());
                }
                out.sort();
                out.dedup();
                out
            }
            TypeNode::Neg(x) => (*self.dnf_neg_lines(x)).clone(),
            _ => normalize(self, vec![t], Vec::new()).into_iter().collect(),
        };
        let rc = Rc::new(lines);
        self.memo.borrow_mut().dnf.insert(t, rc.clone());
        rc
    }

    fn dnf_neg_lines(&self, t: TypeId) -> Rc<Vec<DnfLine>> {
        if let Some(d) = self.memo.borrow().dnf_neg.get(&t) {
            return d.clone();
        }
        let lines = match self.node(t) {
            TypeNode::Empty => vec![DnfLine {
                pos: Vec::new(),
                neg: Vec::new(),
            }],
            TypeNode::Union(ms) => {
                let mut acc = vec![DnfLine {
                    pos: Vec::new(),
                    neg: Vec::new(),
                }];
                for m in ms {
                    let d = self.dnf_neg_lines(m);
                    acc = cross(self, &acc, &d);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
            TypeNode::Neg(x) => (*self.dnf_lines(x)).clone(),
            _ => normalize(self, Vec::new(), vec![t]).into_iter().collect(),
        };
        let rc = Rc::new(lines);
        self.memo.borrow_mut().dnf_neg.insert(t, rc.clone());
        rc
    }

    /// Disjunctive normal form of `t`. Atoms are kept opaque, so recursive
    /// types unfold one constructor layer at a time.
    pub fn dnf(&self, t: TypeId) -> Dnf {
        Dnf {
            lines: (*self.dnf_lines(t)).clone(),
        }
    }

    /// Reassembles a line as a type.
    pub fn line_type(&self, l: &DnfLine) -> TypeId {
        let p = self.and_all(l.pos.iter().copied());
        let n = l.neg.iter().map(|&a| self.neg(a));
        self.and_all(std::iter::once(p).chain(n))
    }

    pub fn dnf_type(&self, d: &Dnf) -> TypeId {
        self.or_all(d.lines.iter().map(|l| self.line_type(l)))
    }

    /// Top atom of each kind.
    pub fn kind_top(&self, k: Kind) -> TypeId {
        match k {
            Kind::Bot => self.bot(),
            Kind::Basic => self.basic(BaseDescriptor::all()),
            Kind::Prod => self.top_prod(),
            Kind::Arrow => self.top_arrow(),
        }
    }

    /// Splits a line with no positive atom into one line per kind.
    fn split_line(&self, l: &DnfLine) -> Vec<(Kind, DnfLine)> {
        if let Some(&p) = l.pos.first() {
            return vec![(kind_of(self, p), l.clone())];
        }
        Kind::ALL
            .iter()
            .filter_map(|&k| {
                let neg = l
                    .neg
                    .iter()
                    .copied()
                    .filter(|&n| kind_of(self, n) == k)
                    .collect();
                normalize(self, vec![self.kind_top(k)], neg).map(|line| (k, line))
            })
            .collect()
    }

    /// Groups the lines of `t` by atom kind.
    pub fn kind_split(&self, t: TypeId) -> KindSplit {
        let mut out = KindSplit::default();
        for l in self.dnf_lines(t).iter() {
            for (k, line) in self.split_line(l) {
                out.get_mut(k).push(line);
            }
        }
        out
    }

    /// Is `⟦t⟧ = ∅`?
    pub fn is_empty(&self, t: TypeId) -> bool {
        if t == self.empty() {
            return true;
        }
        let key = Key::Type(t);
        if let Some(r) = self.cached(&key) {
            return r;
        }
        let lines = self.dnf_lines(t);
        let r = lines.iter().all(|l| {
            self.split_line(l)
                .into_iter()
                .all(|(k, line)| self.line_empty(k, &line))
        });
        self.record(key, r, None);
        r
    }

    fn cached(&self, key: &Key) -> Option<bool> {
        let memo = self.memo.borrow();
        if let Some(&r) = memo.done.get(key) {
            return Some(r);
        }
        if memo.provisional.contains(key) {
            return Some(true);
        }
        None
    }

    /// Stores an emptiness verdict. `mark` is the log length when the
    /// computation of a line began.
    fn record(&self, key: Key, empty: bool, mark: Option<usize>) {
        let mut memo = self.memo.borrow_mut();
        if !empty {
            if let Some(mark) = mark {
                let dropped: Vec<Key> = memo.log.drain(mark..).collect();
                for k in dropped {
                    memo.provisional.remove(&k);
                }
            }
            memo.done.insert(key, false);
        } else if memo.in_progress.is_empty() {
            let committed: Vec<Key> = memo.log.drain(..).collect();
            for k in committed {
                memo.provisional.remove(&k);
                memo.done.insert(k, true);
            }
            memo.done.insert(key, true);
        } else {
            memo.provisional.insert(key.clone());
            memo.log.push(key);
        }
    }

    /// Emptiness of a line whose positive atoms all have kind `k`.
    fn line_empty(&self, k: Kind, l: &DnfLine) -> bool {
        match k {
            Kind::Bot => l.neg.contains(&self.bot()),
            Kind::Basic => {
                let mut d = BaseDescriptor::all();
                for &p in &l.pos {
                    d = d.intersection(&basic_of(self, p));
                }
                for &n in &l.neg {
                    d = d.difference(&basic_of(self, n));
                }
                d.is_empty()
            }
            Kind::Prod | Kind::Arrow => {
                let key = Key::Line(k, l.pos.clone(), l.neg.clone());
                if let Some(r) = self.cached(&key) {
                    return r;
                }
                let mark = {
                    let mut memo = self.memo.borrow_mut();
                    if memo.in_progress.contains(&key) {
                        return true;
                    }
                    memo.in_progress.insert(key.clone());
                    memo.log.len()
                };
                let r = if k == Kind::Prod {
                    self.prod_line_empty(l)
                } else {
                    self.arrow_line_empty(l)
                };
                self.memo.borrow_mut().in_progress.remove(&key);
                self.record(key, r, Some(mark));
                r
            }
        }
    }

    pub(crate) fn prod_parts(&self, atom: TypeId) -> (TypeId, TypeId) {
        match self.node(atom) {
            TypeNode::Prod(a, b) => (a, b),
            other => unreachable!("not a product atom: {other:?}"),
        }
    }

    pub(crate) fn arrow_parts(&self, atom: TypeId) -> (TypeId, TypeId) {
        match self.node(atom) {
            TypeNode::Arrow(a, b) => (a, b),
            other => unreachable!("not an arrow atom: {other:?}"),
        }
    }

    fn prod_line_empty(&self, l: &DnfLine) -> bool {
        let a = self.and_all(l.pos.iter().map(|&p| self.prod_parts(p).0));
        let b = self.and_all(l.pos.iter().map(|&p| self.prod_parts(p).1));
        let neg: Vec<(TypeId, TypeId)> = l.neg.iter().map(|&n| self.prod_parts(n)).collect();
        self.rect_covered(a, b, &neg)
    }

    /// Is `a × b` contained in the union of the rectangles `neg`?
    fn rect_covered(&self, a: TypeId, b: TypeId, neg: &[(TypeId, TypeId)]) -> bool {
        if self.is_empty(a) || self.is_empty(b) {
            return true;
        }
        let Some((&(c, d), rest)) = neg.split_first() else {
            return false;
        };
        self.rect_covered(self.diff(a, c), b, rest)
            && self.rect_covered(self.and(a, c), self.diff(b, d), rest)
    }

    fn arrow_line_empty(&self, l: &DnfLine) -> bool {
        let pos: Vec<(TypeId, TypeId)> = if l.pos.is_empty() {
            vec![(self.empty(), self.any())]
        } else {
            l.pos.iter().map(|&p| self.arrow_parts(p)).collect()
        };
        let doms = self.or_all(pos.iter().map(|&(a, _)| a));
        l.neg.iter().any(|&n| {
            let (c, d) = self.arrow_parts(n);
            self.subtype(c, doms) && self.arrow_cover(c, self.neg(d), &pos)
        })
    }

    /// For every split of `pos` into `Q` and the rest `R`: `c ≤ ⋁dom(Q)` or
    /// `⋀cod(R) ≤ d`. Here `t1 = c ∖ ⋁dom(Q)` and `t2 = ⋀cod(R) ∖ d`.
    fn arrow_cover(&self, t1: TypeId, t2: TypeId, pos: &[(TypeId, TypeId)]) -> bool {
        if self.is_empty(t1) || self.is_empty(t2) {
            return true;
        }
        let Some((&(a, b), rest)) = pos.split_first() else {
            return false;
        };
        self.arrow_cover(self.diff(t1, a), t2, rest) && self.arrow_cover(t1, self.and(t2, b), rest)
    }

    pub fn subtype(&self, t1: TypeId, t2: TypeId) -> bool {
        t1 == t2 || self.is_empty(self.diff(t1, t2))
    }

    pub fn equiv(&self, t1: TypeId, t2: TypeId) -> bool {
        self.subtype(t1, t2) && self.subtype(t2, t1)
    }

    /// Are `t1` and `t2` disjoint?
    pub fn disjoint(&self, t1: TypeId, t2: TypeId) -> bool {
        self.is_empty(self.and(t1, t2))
    }

    /// Every binding has a nonempty type.
    pub fn env_wellformed(&self, g: &TypeEnv) -> bool {
        g.iter().all(|(_, t)| !self.is_empty(t))
    }
}
