use std::fmt;

use super::store::TypeId;

/// Typing environment `Γ`. Later bindings shadow earlier ones.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TypeEnv {
    bindings: Vec<(String, TypeId)>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, x: &str) -> Option<TypeId> {
        self.bindings
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|&(_, t)| t)
    }

    /// A copy of the environment extended with `x : t`.
    pub fn extend(&self, x: &str, t: TypeId) -> Self {
        let mut bindings = self.bindings.clone();
        bindings.push((x.to_string(), t));
        TypeEnv { bindings }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TypeId)> {
        self.bindings.iter().map(|(x, t)| (x.as_str(), *t))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl fmt::Debug for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.bindings.iter().map(|(x, t)| (x, t)))
            .finish()
    }
}

impl FromIterator<(String, TypeId)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (String, TypeId)>>(iter: I) -> Self {
        TypeEnv {
            bindings: iter.into_iter().collect(),
        }
    }
}
