//! The set-theoretic interpretation made executable on finite elements.
//!
//! `member` decides `(d : t)` clause by clause. `enumerate` lists the
//! bounded domain lazily, and `find_counterexample` searches it (first
//! exhaustively up to a budget, then along candidates read off the types)
//! for an element of `t1` outside `t2`. Every reported witness is checked
//! with `member`, so a witness always refutes `t1 ≤ t2`.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;

use crate::types::{Constant, IntSet, TypeId, TypeNode, TypeStore};

/// An element `d` of the interpretation domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainElem {
    Divergence,
    Const(Constant),
    Pair(Box<DomainElem>, Box<DomainElem>),
    /// A finite relation; outputs may be the error `Ω`.
    Relation(Vec<(DomainElem, Output)>),
}

/// `d_Ω`: an element or the error.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Elem(DomainElem),
    Omega,
}

impl DomainElem {
    pub fn int(n: i64) -> Self {
        DomainElem::Const(Constant::int(n))
    }

    pub fn boolean(b: bool) -> Self {
        DomainElem::Const(Constant::Bool(b))
    }

    pub fn pair(a: DomainElem, b: DomainElem) -> Self {
        DomainElem::Pair(Box::new(a), Box::new(b))
    }

    /// A relation with its entries in canonical order and without repeats.
    pub fn relation(entries: impl IntoIterator<Item = (DomainElem, Output)>) -> Self {
        let set: BTreeSet<_> = entries.into_iter().collect();
        DomainElem::Relation(set.into_iter().collect())
    }

    /// Constants and `⊥` have depth 0; constructors add one.
    pub fn depth(&self) -> usize {
        match self {
            DomainElem::Divergence | DomainElem::Const(_) => 0,
            DomainElem::Pair(a, b) => 1 + a.depth().max(b.depth()),
            DomainElem::Relation(r) => {
                1 + r
                    .iter()
                    .map(|(x, y)| x.depth().max(y.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Largest relation size anywhere inside the element.
    pub fn max_relation_size(&self) -> usize {
        match self {
            DomainElem::Divergence | DomainElem::Const(_) => 0,
            DomainElem::Pair(a, b) => a.max_relation_size().max(b.max_relation_size()),
            DomainElem::Relation(r) => r
                .iter()
                .map(|(x, y)| x.max_relation_size().max(y.max_relation_size()))
                .max()
                .unwrap_or(0)
                .max(r.len()),
        }
    }

    fn constants(&self, out: &mut BTreeSet<Constant>) {
        match self {
            DomainElem::Divergence => {}
            DomainElem::Const(c) => {
                out.insert(c.clone());
            }
            DomainElem::Pair(a, b) => {
                a.constants(out);
                b.constants(out);
            }
            DomainElem::Relation(r) => {
                for (x, y) in r {
                    x.constants(out);
                    if let Output::Elem(y) = y {
                        y.constants(out);
                    }
                }
            }
        }
    }
}

impl Output {
    fn depth(&self) -> usize {
        match self {
            Output::Elem(d) => d.depth(),
            Output::Omega => 0,
        }
    }

    fn max_relation_size(&self) -> usize {
        match self {
            Output::Elem(d) => d.max_relation_size(),
            Output::Omega => 0,
        }
    }
}

impl fmt::Display for DomainElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainElem::Divergence => f.write_str("bot"),
            DomainElem::Const(c) => write!(f, "{c}"),
            DomainElem::Pair(a, b) => write!(f, "({a}, {b})"),
            DomainElem::Relation(r) => {
                f.write_str("{")?;
                for (i, (x, y)) in r.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x} -> {y}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Elem(d) => write!(f, "{d}"),
            Output::Omega => f.write_str("omega"),
        }
    }
}

/// `(d_Ω : t)`. The error belongs to no type.
pub fn member_output(store: &TypeStore, d: &Output, t: TypeId) -> bool {
    match d {
        Output::Elem(d) => member(store, d, t),
        Output::Omega => false,
    }
}

/// `(d : t)`.
pub fn member(store: &TypeStore, d: &DomainElem, t: TypeId) -> bool {
    match store.node(t) {
        TypeNode::Union(ms) => ms.into_iter().any(|m| member(store, d, m)),
        TypeNode::Neg(x) => !member(store, d, x),
        TypeNode::Empty => false,
        TypeNode::Bot => matches!(d, DomainElem::Divergence),
        TypeNode::Basic(b) => matches!(d, DomainElem::Const(c) if b.contains(c)),
        TypeNode::Prod(a, b) => match d {
            DomainElem::Pair(x, y) => member(store, x, a) && member(store, y, b),
            _ => false,
        },
        TypeNode::Arrow(a, b) => match d {
            DomainElem::Relation(r) => r
                .iter()
                .all(|(x, y)| !member(store, x, a) || member_output(store, y, b)),
            _ => false,
        },
    }
}

/// Bounds on the enumerated part of the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_depth: usize,
    pub pool: Vec<Constant>,
    pub max_relation_size: usize,
    /// Number of enumerated elements tried before switching to candidates
    /// derived from the types.
    pub budget: usize,
}

impl Default for EnumBounds {
    fn default() -> Self {
        EnumBounds {
            max_depth: 3,
            pool: default_pool(),
            max_relation_size: 2,
            budget: 4000,
        }
    }
}

impl EnumBounds {
    pub fn new(max_depth: usize, pool: Vec<Constant>, max_relation_size: usize) -> Self {
        EnumBounds {
            max_depth,
            pool,
            max_relation_size,
            ..Self::default()
        }
    }

    fn admits(&self, d: &DomainElem) -> bool {
        d.depth() <= self.max_depth && d.max_relation_size() <= self.max_relation_size
    }
}

/// `{0, 1, 2, true, false}`.
pub fn default_pool() -> Vec<Constant> {
    vec![
        Constant::int(0),
        Constant::int(1),
        Constant::int(2),
        Constant::Bool(true),
        Constant::Bool(false),
    ]
}

/// Lazy enumeration of all elements within `bounds`, by increasing depth,
/// in a fixed order and without duplicates.
pub fn enumerate(bounds: &EnumBounds) -> impl Iterator<Item = DomainElem> {
    Enumerator::new(bounds.clone())
}

struct Enumerator {
    bounds: EnumBounds,
    /// Elements of depth below `level`, with their depths.
    below: Rc<Vec<(DomainElem, usize)>>,
    level: usize,
    current: Box<dyn Iterator<Item = DomainElem>>,
    produced: Vec<(DomainElem, usize)>,
}

impl Enumerator {
    fn new(bounds: EnumBounds) -> Self {
        let mut level0 = vec![DomainElem::Divergence];
        let mut seen = BTreeSet::new();
        for c in &bounds.pool {
            if seen.insert(c.clone()) {
                level0.push(DomainElem::Const(c.clone()));
            }
        }
        Enumerator {
            bounds,
            below: Rc::new(Vec::new()),
            level: 0,
            current: Box::new(level0.into_iter()),
            produced: Vec::new(),
        }
    }

    fn advance_level(&mut self) -> bool {
        if self.level >= self.bounds.max_depth {
            return false;
        }
        let mut below = (*self.below).clone();
        below.append(&mut self.produced);
        self.below = Rc::new(below);
        self.level += 1;
        self.current = level_iter(
            self.below.clone(),
            self.level,
            self.bounds.max_relation_size,
        );
        true
    }
}

impl Iterator for Enumerator {
    type Item = DomainElem;

    fn next(&mut self) -> Option<DomainElem> {
        loop {
            if let Some(d) = self.current.next() {
                if self.level < self.bounds.max_depth {
                    self.produced.push((d.clone(), self.level));
                }
                return Some(d);
            }
            if !self.advance_level() {
                return None;
            }
        }
    }
}

/// Elements of depth exactly `level ≥ 1`, built from `below`.
fn level_iter(
    below: Rc<Vec<(DomainElem, usize)>>,
    level: usize,
    k: usize,
) -> Box<dyn Iterator<Item = DomainElem>> {
    let n = below.len();
    let top = level - 1;
    let b1 = below.clone();
    let pairs = (0..n * n).filter_map(move |ix| {
        let (i, j) = (ix / n, ix % n);
        let ((a, da), (b, db)) = (&b1[i], &b1[j]);
        ((*da).max(*db) == top).then(|| DomainElem::pair(a.clone(), b.clone()))
    });
    // Relation entries: (x, y) with y possibly Ω (encoded as index n).
    let entries = n * (n + 1);
    let b2 = below.clone();
    let entry_depth = move |e: usize| {
        let (i, j) = (e / (n + 1), e % (n + 1));
        let dj = if j == n { 0 } else { b2[j].1 };
        b2[i].1.max(dj)
    };
    let b3 = below.clone();
    let make_entry = move |e: usize| {
        let (i, j) = (e / (n + 1), e % (n + 1));
        let y = if j == n {
            Output::Omega
        } else {
            Output::Elem(b3[j].0.clone())
        };
        (b3[i].0.clone(), y)
    };
    let empty = (level == 1).then(|| DomainElem::Relation(Vec::new()));
    let relations = (1..=k).flat_map(move |size| {
        let entry_depth = entry_depth.clone();
        let make_entry = make_entry.clone();
        Combinations::new(entries, size)
            .filter(move |c| c.iter().any(|&e| entry_depth(e) == top))
            .map(move |c| DomainElem::Relation(c.into_iter().map(&make_entry).collect()))
    });
    Box::new(pairs.chain(empty).chain(relations))
}

/// Strictly increasing index tuples of a given size over `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, size: usize) -> Self {
        Combinations {
            n,
            idx: (0..size).collect(),
            done: size > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

const CAP: usize = 24;

/// Candidate elements read off the syntax of a type: `positive` asks for
/// elements likely inside `t`, otherwise outside.
struct Candidates<'s> {
    store: &'s TypeStore,
    pool: Vec<Constant>,
}

fn push_unique(out: &mut Vec<DomainElem>, d: DomainElem) {
    if out.len() < CAP * 4 && !out.contains(&d) {
        out.push(d);
    }
}

impl Candidates<'_> {
    fn generic(&self, depth: usize) -> Vec<DomainElem> {
        let mut out = vec![DomainElem::Divergence];
        for c in &self.pool {
            out.push(DomainElem::Const(c.clone()));
        }
        if depth > 0 {
            out.push(DomainElem::Relation(Vec::new()));
            out.push(DomainElem::pair(
                DomainElem::Divergence,
                DomainElem::Divergence,
            ));
            out.push(DomainElem::relation([(
                DomainElem::Divergence,
                Output::Omega,
            )]));
        }
        out
    }

    fn ints(&self, s: &IntSet) -> Vec<BigInt> {
        let pool_ints = self.pool.iter().filter_map(|c| match c {
            Constant::Int(n) => Some(n.clone()),
            Constant::Bool(_) => None,
        });
        let mut out: Vec<BigInt> = pool_ints.filter(|n| s.contains(n)).collect();
        match s {
            IntSet::Finite(xs) => out.extend(xs.iter().take(2).cloned()),
            IntSet::Cofinite(xs) => {
                let mut n = BigInt::from(0);
                while xs.contains(&n) || out.contains(&n) {
                    n += 1;
                }
                out.push(n);
            }
        }
        out.dedup();
        out
    }

    fn of(&self, t: TypeId, positive: bool, depth: usize) -> Vec<DomainElem> {
        let s = self.store;
        let mut out = Vec::new();
        match s.node(t) {
            TypeNode::Neg(x) => return self.of(x, !positive, depth),
            TypeNode::Union(ms) => {
                for m in ms {
                    for d in self.of(m, positive, depth) {
                        push_unique(&mut out, d);
                    }
                }
                if !positive {
                    for d in self.generic(depth) {
                        push_unique(&mut out, d);
                    }
                }
                return out;
            }
            _ if !positive => {
                for d in self.generic(depth) {
                    push_unique(&mut out, d);
                }
            }
            _ => {}
        }
        match (s.node(t), positive) {
            (TypeNode::Bot, true) => out.push(DomainElem::Divergence),
            (TypeNode::Basic(b), true) => {
                for n in self.ints(&b.ints) {
                    out.push(DomainElem::Const(Constant::Int(n)));
                }
                if b.has_true {
                    out.push(DomainElem::boolean(true));
                }
                if b.has_false {
                    out.push(DomainElem::boolean(false));
                }
            }
            (TypeNode::Basic(b), false) => {
                for n in self.ints(&b.ints.complement()) {
                    push_unique(&mut out, DomainElem::Const(Constant::Int(n)));
                }
            }
            (TypeNode::Prod(a, b), pos) if depth > 0 => {
                let la = self.of(a, true, depth - 1);
                let lb = self.of(b, true, depth - 1);
                if pos {
                    for x in la.iter().take(6) {
                        for y in lb.iter().take(6) {
                            push_unique(&mut out, DomainElem::pair(x.clone(), y.clone()));
                        }
                    }
                } else {
                    let na = self.of(a, false, depth - 1);
                    let nb = self.of(b, false, depth - 1);
                    for x in na.iter().take(5) {
                        for y in lb.iter().chain(&nb).take(5) {
                            push_unique(&mut out, DomainElem::pair(x.clone(), y.clone()));
                        }
                    }
                    for x in la.iter().take(5) {
                        for y in nb.iter().take(5) {
                            push_unique(&mut out, DomainElem::pair(x.clone(), y.clone()));
                        }
                    }
                }
            }
            (TypeNode::Arrow(a, b), pos) if depth > 0 => {
                let ia = self.of(a, true, depth - 1);
                let oa = self.of(a, false, depth - 1);
                let ib = self.of(b, true, depth - 1);
                let ob = self.of(b, false, depth - 1);
                if pos {
                    push_unique(&mut out, DomainElem::Relation(Vec::new()));
                    for x in ia.iter().take(5) {
                        for y in ib.iter().take(4) {
                            push_unique(
                                &mut out,
                                DomainElem::relation([(x.clone(), Output::Elem(y.clone()))]),
                            );
                        }
                    }
                    for x in oa.iter().take(5) {
                        push_unique(&mut out, DomainElem::relation([(x.clone(), Output::Omega)]));
                    }
                } else {
                    for x in ia.iter().take(6) {
                        push_unique(&mut out, DomainElem::relation([(x.clone(), Output::Omega)]));
                        for y in ob.iter().take(4) {
                            push_unique(
                                &mut out,
                                DomainElem::relation([(x.clone(), Output::Elem(y.clone()))]),
                            );
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }
}

/// Relations combining two single-entry candidates, to witness differences
/// between intersections of arrows.
fn merge_relations(cands: &[DomainElem]) -> Vec<DomainElem> {
    let singles: Vec<&(DomainElem, Output)> = cands
        .iter()
        .filter_map(|d| match d {
            DomainElem::Relation(r) if r.len() == 1 => Some(&r[0]),
            _ => None,
        })
        .take(16)
        .collect();
    let mut out = Vec::new();
    for (i, x) in singles.iter().enumerate() {
        for y in &singles[i + 1..] {
            out.push(DomainElem::relation([(*x).clone(), (*y).clone()]));
        }
    }
    out
}

/// An element of `t1` outside `t2` within `bounds`, if one is found.
pub fn find_counterexample(
    store: &TypeStore,
    t1: TypeId,
    t2: TypeId,
    bounds: &EnumBounds,
) -> Option<DomainElem> {
    let refutes = |d: &DomainElem| member(store, d, t1) && !member(store, d, t2);
    if let Some(d) = enumerate(bounds).take(bounds.budget).find(|d| refutes(d)) {
        return Some(d);
    }
    let gen = Candidates {
        store,
        pool: bounds.pool.clone(),
    };
    let mut cands = gen.of(t1, true, bounds.max_depth);
    for d in gen.of(t2, false, bounds.max_depth) {
        if !cands.contains(&d) {
            cands.push(d);
        }
    }
    if bounds.max_relation_size >= 2 {
        cands.extend(merge_relations(&cands));
    }
    cands
        .into_iter()
        .filter(|d| bounds.admits(d))
        .find(|d| refutes(d))
}

/// Outcome of comparing the decision procedure against the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The two agree; the witness is present when `t1 ≰ t2`.
    Consistent(Option<DomainElem>),
    /// `t1 ≤ t2` was decided yet an element of `t1 ∖ t2` exists.
    SoundnessViolation(DomainElem),
    /// `t1 ≰ t2` was decided but no witness was found within the bounds.
    Inconclusive,
}

pub fn cross_check(store: &TypeStore, t1: TypeId, t2: TypeId, bounds: &EnumBounds) -> Verdict {
    let holds = store.subtype(t1, t2);
    match (holds, find_counterexample(store, t1, t2, bounds)) {
        (true, None) => Verdict::Consistent(None),
        (true, Some(d)) => Verdict::SoundnessViolation(d),
        (false, Some(d)) => Verdict::Consistent(Some(d)),
        (false, None) => Verdict::Inconclusive,
    }
}

/// Constants appearing inside `d`.
pub fn constants_of(d: &DomainElem) -> BTreeSet<Constant> {
    let mut out = BTreeSet::new();
    d.constants(&mut out);
    out
}
