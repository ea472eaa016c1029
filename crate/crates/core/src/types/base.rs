//! Basic types: sets of constants drawn from the integers and the booleans.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

/// A language constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Int(BigInt),
    Bool(bool),
}

impl Constant {
    pub fn int(n: i64) -> Self {
        Constant::Int(BigInt::from(n))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Int(n) => write!(f, "{n}"),
            Constant::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// A finite or cofinite set of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntSet {
    Finite(BTreeSet<BigInt>),
    Cofinite(BTreeSet<BigInt>),
}

impl IntSet {
    pub fn empty() -> Self {
        IntSet::Finite(BTreeSet::new())
    }

    pub fn all() -> Self {
        IntSet::Cofinite(BTreeSet::new())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntSet::Finite(s) if s.is_empty())
    }

    pub fn is_all(&self) -> bool {
        matches!(self, IntSet::Cofinite(s) if s.is_empty())
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        match self {
            IntSet::Finite(s) => s.contains(n),
            IntSet::Cofinite(s) => !s.contains(n),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            IntSet::Finite(s) => IntSet::Cofinite(s.clone()),
            IntSet::Cofinite(s) => IntSet::Finite(s.clone()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use IntSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.union(b).cloned().collect()),
            (Cofinite(a), Cofinite(b)) => Cofinite(a.intersection(b).cloned().collect()),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => {
                Cofinite(b.difference(a).cloned().collect())
            }
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }
}

/// Descriptor of a basic type: the constants it contains.
///
/// Integers and booleans are disjoint, so the descriptor keeps one
/// component per sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseDescriptor {
    pub ints: IntSet,
    pub has_true: bool,
    pub has_false: bool,
}

impl BaseDescriptor {
    pub fn empty() -> Self {
        BaseDescriptor {
            ints: IntSet::empty(),
            has_true: false,
            has_false: false,
        }
    }

    /// Every constant.
    pub fn all() -> Self {
        BaseDescriptor {
            ints: IntSet::all(),
            has_true: true,
            has_false: true,
        }
    }

    pub fn int() -> Self {
        BaseDescriptor {
            ints: IntSet::all(),
            ..Self::empty()
        }
    }

    pub fn boolean() -> Self {
        BaseDescriptor {
            has_true: true,
            has_false: true,
            ..Self::empty()
        }
    }

    pub fn singleton(c: &Constant) -> Self {
        match c {
            Constant::Int(n) => BaseDescriptor {
                ints: IntSet::Finite(std::iter::once(n.clone()).collect()),
                ..Self::empty()
            },
            Constant::Bool(true) => BaseDescriptor {
                has_true: true,
                ..Self::empty()
            },
            Constant::Bool(false) => BaseDescriptor {
                has_false: true,
                ..Self::empty()
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.ints.is_empty() && !self.has_true && !self.has_false
    }

    pub fn is_all(&self) -> bool {
        self.ints.is_all() && self.has_true && self.has_false
    }

    pub fn contains(&self, c: &Constant) -> bool {
        match c {
            Constant::Int(n) => self.ints.contains(n),
            Constant::Bool(true) => self.has_true,
            Constant::Bool(false) => self.has_false,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        BaseDescriptor {
            ints: self.ints.union(&other.ints),
            has_true: self.has_true || other.has_true,
            has_false: self.has_false || other.has_false,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        BaseDescriptor {
            ints: self.ints.intersection(&other.ints),
            has_true: self.has_true && other.has_true,
            has_false: self.has_false && other.has_false,
        }
    }

    /// Complement relative to the set of all constants.
    pub fn complement(&self) -> Self {
        BaseDescriptor {
            ints: self.ints.complement(),
            has_true: !self.has_true,
            has_false: !self.has_false,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    /// The integer component alone.
    pub fn int_part(&self) -> Self {
        BaseDescriptor {
            ints: self.ints.clone(),
            ..Self::empty()
        }
    }

    /// The boolean component alone.
    pub fn bool_part(&self) -> Self {
        BaseDescriptor {
            ints: IntSet::empty(),
            ..self.clone()
        }
    }

    /// Is this the singleton type of one constant?
    pub fn as_singleton(&self) -> Option<Constant> {
        match (&self.ints, self.has_true, self.has_false) {
            (IntSet::Finite(s), false, false) if s.len() == 1 => {
                s.iter().next().cloned().map(Constant::Int)
            }
            (IntSet::Finite(s), true, false) if s.is_empty() => Some(Constant::Bool(true)),
            (IntSet::Finite(s), false, true) if s.is_empty() => Some(Constant::Bool(false)),
            _ => None,
        }
    }
}
